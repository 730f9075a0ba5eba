from .field import hash_to_scalar
from .groups import G, H, T, Element, MockSuite, PairingSuite, ToySuite, default_rng, get_suite
from .policy import (
    MSP,
    PolicyError,
    attribute_scalar,
    attribute_set,
    lss_share,
    msp_satisfy,
    parse_policy,
    policy_to_msp,
)

__all__ = [
    "G", "H", "T", "Element", "PairingSuite", "MockSuite", "ToySuite", "get_suite", "default_rng",
    "hash_to_scalar", "MSP", "PolicyError", "attribute_scalar", "attribute_set", "lss_share",
    "msp_satisfy", "parse_policy", "policy_to_msp",
]
