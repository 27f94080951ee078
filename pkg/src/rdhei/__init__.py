"""Reversible data hiding in encrypted images by multi-MSB replacement.

Two schemes are provided: EMR (high capacity, the LSB plane is lost on
recovery) and LMR (bit-exact recovery, maps stored compressed in the MSB
plane).  Both are separable: the message needs only the data-hiding key,
the image only the encryption key.
"""
from ._backend import NAME as BACKEND
from .api import capacity, detect_method, encode, extract, hide, recover
from .emr import emr_encode, emr_extract, emr_hide, emr_recover
from .errors import (
    CapacityError,
    DecodeError,
    FormatError,
    IntegrityError,
    KeyFormatError,
    PgmError,
    RdheiError,
    UnsupportedDepthError,
    UnsupportedSizeError,
)
from .lmr import lmr_encode, lmr_extract, lmr_hide, lmr_recover
from .pixmap_io import load_pgm, read_pgm, save_pgm, write_pgm

__version__ = "0.1.0"
