"""Configuration management"""
import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, '')
    if not raw:
        return default
    # Accept 2**40 style values as well as plain integers
    if '**' in raw:
        base, exp = raw.split('**', 1)
        return int(base) ** int(exp)
    return int(raw.replace('_', ''))


class Config:
    DEBUG = os.getenv('PRIMEBIAS_DEBUG', 'False').lower() == 'true'

    # Sieve settings
    SEGMENT_LENGTH = _int_env('PRIMEBIAS_SEGMENT_LENGTH', 2 ** 20)
    MAX_LIMIT = _int_env('PRIMEBIAS_MAX_LIMIT', 2 ** 40)

    # Series settings
    CUTOFF_R = _int_env('PRIMEBIAS_CUTOFF_R', 10 ** 7)
    CUTOFF_EULER = _int_env('PRIMEBIAS_CUTOFF_EULER', 10 ** 8)
    PRECISION_BITS = _int_env('PRIMEBIAS_PRECISION_BITS', 96)

    # Run settings
    THREADS = _int_env('PRIMEBIAS_THREADS', 1)
    TABLE1_SCALE = _int_env('PRIMEBIAS_TABLE1_SCALE', 100_000)
    TABLE1_FULL = 20_000_000

    # HTTP surface
    API_MAX_BOUND = _int_env('PRIMEBIAS_API_MAX_BOUND', 10 ** 7)
    API_MAX_CUTOFF = _int_env('PRIMEBIAS_API_MAX_CUTOFF', 10 ** 8)


config = Config()
