import pytest

from votesim.core import SimParams, SocialSign


def test_defaults_are_valid():
    p = SimParams()
    assert p.social_sign is SocialSign.ATTRACT
    assert p.candidate_attraction_step > 0


def test_social_sign_coerced_from_string():
    p = SimParams(social_sign="repel-literal")
    assert p.social_sign is SocialSign.REPEL_LITERAL


@pytest.mark.parametrize(
    "field,value",
    [
        ("num_voters", -1),
        ("num_candidates", -2),
        ("appeasement_delta", -0.1),
        ("appeasement_delta", 1.5),
        ("falloff_rate", 2.0),
        ("falloff_rate", -0.01),
        ("max_openness", -0.5),
        ("max_tolerance", -1.0),
        ("candidate_attraction_step", 0.0),
        ("candidate_attraction_step", -0.1),
        ("social_step", -0.2),
        ("seed", -1),
        ("seed", 2**64),
        ("social_sign", "sideways"),
    ],
)
def test_invalid_values_rejected(field, value):
    with pytest.raises(ValueError, match=field):
        SimParams(**{field: value})


def test_num_voters_must_be_integer():
    with pytest.raises(ValueError, match="num_voters"):
        SimParams(num_voters=2.5)
