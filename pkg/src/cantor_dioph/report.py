"""JSON encoding of exact values for reports.

Rationals are written as {"p": .., "q": ..} together with a rounded decimal
marked display-only; LogIntervals as exact endpoint pairs.  Integers too
long for a decimal string (Python refuses int -> str beyond 4300 digits by
default) are written as {"hex": "0x.."}.
"""
import json
from fractions import Fraction

from .arith.intervals import LogInterval, fraction_to_decimal

HEX_BITS = 4000


def encode_int(n):
    n = int(n)
    if n.bit_length() > HEX_BITS:
        return {"hex": hex(n)}
    return n


def decode_int(v):
    if isinstance(v, dict) and "hex" in v:
        return int(v["hex"], 16)
    return int(v)


def encode_fraction(x):
    x = Fraction(x)
    out = {"p": encode_int(x.numerator), "q": encode_int(x.denominator)}
    if max(x.numerator.bit_length(), x.denominator.bit_length()) <= HEX_BITS:
        out["display-only"] = fraction_to_decimal(x, 12)
    return out


def encode_interval(li, bits=64):
    li = LogInterval.lift(li)
    lo, hi = li.at(max(bits, li.bits))
    return {"lo": encode_fraction(lo), "hi": encode_fraction(hi),
            "display-only": fraction_to_decimal((lo + hi) / 2, 12)}


def encode(x):
    """Recursively turn library values into JSON-ready data."""
    from .ifs import Address
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return encode_int(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return encode_int(x.numerator)
        return encode_fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, LogInterval):
        return encode_interval(x)
    if isinstance(x, Address):
        return x.to_text()
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [encode(v) for v in items]
    if hasattr(x, "to_json"):
        return encode(x.to_json())
    raise TypeError("cannot encode %r" % (x,))


def dumps(obj):
    return json.dumps(encode(obj), sort_keys=True, indent=2)
