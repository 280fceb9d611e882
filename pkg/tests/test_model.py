import math

import pytest

from udleak.model import (ETERNAL, GAUSSIAN, ConfigError, DetectorPairConfig,
                          FieldSpec, InitialState, SwitchingSpec, UnitSystem,
                          bell_state, validate_config)


def _pair(**kw):
    base = dict(delta_e=1.0, coupling_a=0.1, coupling_b=0.1, distance=0.5)
    base.update(kw)
    return DetectorPairConfig(**base)


def test_valid_eternal_scenario():
    sc = validate_config(_pair(), FieldSpec(), bell_state(), SwitchingSpec())
    assert sc.channel_open
    assert sc.units.c == 1.0
    assert sc.switching.kind == ETERNAL


def test_bell_state_signs():
    plus = bell_state(+1)
    minus = bell_state(-1)
    assert plus.alpha == pytest.approx(1.0 / math.sqrt(2.0))
    assert plus.gamma == plus.alpha
    assert minus.gamma == -minus.alpha


def test_channel_closed_at_and_below_threshold():
    # the exact threshold DeltaE = m c^2 counts as closed
    at = validate_config(_pair(delta_e=1.0), FieldSpec(mass=1.0),
                         bell_state(), SwitchingSpec())
    below = validate_config(_pair(delta_e=0.5), FieldSpec(mass=1.0),
                            bell_state(), SwitchingSpec())
    assert not at.channel_open
    assert not below.channel_open


def test_channel_threshold_scales_with_c():
    sc = validate_config(_pair(delta_e=3.0), FieldSpec(mass=1.0),
                         bell_state(), SwitchingSpec(), UnitSystem(c=2.0))
    assert not sc.channel_open  # m c^2 = 4 > 3


def test_error_messages_accumulate():
    with pytest.raises(ConfigError) as exc:
        validate_config(_pair(delta_e=-1.0, coupling_a=-0.1),
                        FieldSpec(mass=-2.0), bell_state(), SwitchingSpec())
    messages = exc.value.messages
    assert len(messages) == 3
    assert any("delta_e" in m for m in messages)
    assert any("coupling_a" in m for m in messages)
    assert any("mass" in m for m in messages)


def test_normalization_enforced():
    with pytest.raises(ConfigError, match="not normalized"):
        validate_config(_pair(), FieldSpec(),
                        InitialState(alpha=0.8, gamma=0.7), SwitchingSpec())


def test_alpha_sign_convention():
    with pytest.raises(ConfigError, match="alpha"):
        validate_config(_pair(), FieldSpec(),
                        InitialState(alpha=-0.6, gamma=0.8), SwitchingSpec())
    # gamma may be negative
    sc = validate_config(_pair(), FieldSpec(),
                         InitialState(alpha=0.6, gamma=-0.8), SwitchingSpec())
    assert sc.state.gamma == -0.8


def test_gaussian_needs_sigma():
    with pytest.raises(ConfigError, match="sigma"):
        validate_config(_pair(), FieldSpec(), bell_state(),
                        SwitchingSpec(kind=GAUSSIAN))
    sc = validate_config(_pair(), FieldSpec(), bell_state(),
                         SwitchingSpec(kind=GAUSSIAN, sigma=2.0))
    assert sc.switching.sigma == 2.0


def test_unknown_switching_kind_rejected():
    with pytest.raises(ConfigError, match="kind"):
        validate_config(_pair(), FieldSpec(), bell_state(),
                        SwitchingSpec(kind="tophat"))


def test_nonstatic_trajectory_rejected():
    with pytest.raises(ConfigError, match="trajectory"):
        validate_config(_pair(trajectory="inertial"), FieldSpec(),
                        bell_state(), SwitchingSpec())


def test_shielded_coupling_allowed():
    sc = validate_config(_pair(coupling_b=0.0), FieldSpec(), bell_state(),
                         SwitchingSpec())
    assert sc.pair.coupling_b == 0.0
