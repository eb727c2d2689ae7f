"""(1;2) sector-disk and partial-MDS array codes extending RAID 5."""
from pmds.algebra import AlgebraKind, AlgebraSpec, NotAUnit
from pmds.construction import CodeParams, ParameterViolation, Variant, build_parity_check
from pmds.codec import DecodeFailure, ErasurePattern, StripeArray, decode, encode

__all__ = [
    "AlgebraKind",
    "AlgebraSpec",
    "CodeParams",
    "DecodeFailure",
    "ErasurePattern",
    "NotAUnit",
    "ParameterViolation",
    "StripeArray",
    "Variant",
    "build_parity_check",
    "decode",
    "encode",
]
