"""Unit conversions at the wire/CLI boundary.

Internally everything is SI with angular frequencies (rad/s) and phases in
radians.  Files, CLI flags, and service payloads use ordinary (cyclic)
frequencies in GHz/MHz/kHz, times in microseconds, and external flux in units
of the flux quantum.  These helpers are the only place that factor of 2*pi
lives.
"""

from __future__ import annotations

import math

TWO_PI = 2.0 * math.pi

GHZ = 1e9
MHZ = 1e6
KHZ = 1e3
US = 1e-6


def ghz_to_rad(f):
    """Cyclic GHz -> angular rad/s."""
    return TWO_PI * GHZ * f


def rad_to_ghz(w):
    """Angular rad/s -> cyclic GHz."""
    return w / (TWO_PI * GHZ)


def mhz_to_rad(f):
    return TWO_PI * MHZ * f


def rad_to_mhz(w):
    return w / (TWO_PI * MHZ)


def khz_to_rad(f):
    return TWO_PI * KHZ * f


def rad_to_khz(w):
    return w / (TWO_PI * KHZ)


def hz_to_rad(f):
    return TWO_PI * f


def rad_to_hz(w):
    return w / TWO_PI


def us_to_s(t):
    return t * US


def s_to_us(t):
    return t / US
