from typing import Any, List, Optional
import re

from constants import SUPPORTED_ORDERS


def strip_and_convert_empty_to_none(v: Any) -> Any:
    if isinstance(v, str):
        v = v.strip()
        return None if v == "" else v
    elif v == "":
        return None
    return v


# common validation utilities for field validators
def validate_non_negative_int(v: Any, field_name: str = "Value") -> Optional[int]:
    if v is None:
        return None
    if isinstance(v, bool):
        raise ValueError(f"{field_name} must be an integer, got {v}")
    try:
        numeric_val = int(str(v).strip())
    except ValueError:
        raise ValueError(f"{field_name} must be a valid integer, got '{v}'")
    if numeric_val < 0:
        raise ValueError(f"{field_name} must be non-negative, got {numeric_val}")
    return numeric_val


def validate_positive_int(v: Any, field_name: str = "Value") -> Optional[int]:
    numeric_val = validate_non_negative_int(v, field_name)
    if numeric_val == 0:
        raise ValueError(f"{field_name} must be positive, got 0")
    return numeric_val


def validate_order_name(v: Any) -> str:
    if v not in SUPPORTED_ORDERS:
        raise ValueError(f"Monomial order must be one of {', '.join(SUPPORTED_ORDERS)}, got '{v}'")
    return v


def parse_int_list(v: Any, field_name: str = "Value") -> Optional[List[int]]:
    """'2,3,4', '(2, 3, 4)' or '[2 3 4]' -> [2, 3, 4]."""
    if v is None or isinstance(v, list):
        return v
    text = str(v).strip().strip("()[]")
    if not text:
        return []
    parts = [p for p in re.split(r"[,\s]+", text) if p]
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"{field_name} must be a list of integers, got '{v}'")


def parse_bool(v: Any, field_name: str = "Value") -> Optional[bool]:
    if v is None or isinstance(v, bool):
        return v
    text = str(v).strip().lower()
    if not text:
        return None
    if text in ("true", "yes", "1"):
        return True
    if text in ("false", "no", "0"):
        return False
    raise ValueError(f"{field_name} must be true or false, got '{v}'")


def validate_rational_text(v: Any, field_name: str = "Value") -> str:
    text = str(v).strip()
    if not re.match(r'^-?\d+(/\d+)?$', text):
        raise ValueError(f"{field_name} must be a rational number like '3' or '-4/7', got '{v}'")
    return text
