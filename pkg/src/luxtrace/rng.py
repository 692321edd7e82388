"""PCG32 (XSH-RR 64/32) random streams.

State advances are pure: every operation takes a state and returns the drawn
value together with the successor state.  Per-(pixel, sample) streams are
derived with a splitmix64-style finalizer so any pixel/sample pair can be
reproduced in isolation, independent of render schedule.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _parallel  # noqa: F401
from numba import njit

_PCG_MULT = np.uint64(6364136223846793005)
_U64_1 = np.uint64(1)
_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_M2 = np.uint64(0x94D049BB133111EB)
_M32 = np.uint64(0xFFFFFFFF)
_R31 = np.uint64(31)
_R32 = np.uint64(32)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class PcgState:
    """Immutable PCG32 stream position (64-bit state, odd 64-bit increment)."""

    state: int
    increment: int


@njit(cache=True)
def _pcg_next(state, inc):
    """One XSH-RR step.  Returns (u32 output as uint64, new state).

    All arithmetic stays in uint64 with explicit 32-bit masking; mixed-width
    integer math would silently widen the rotate."""
    new_state = state * _PCG_MULT + inc
    xorshifted = (((state >> np.uint64(18)) ^ state) >> np.uint64(27)) & _M32
    rot = state >> np.uint64(59)
    out = ((xorshifted >> rot) | (xorshifted << ((_R32 - rot) & _R31))) & _M32
    return out, new_state


@njit(cache=True)
def _pcg_seed(init_state, init_seq):
    """Reference seeding ritual: zero state, step, add init_state, step."""
    inc = (init_seq << _U64_1) | _U64_1
    state = np.uint64(0)
    _, state = _pcg_next(state, inc)
    state = state + init_state
    _, state = _pcg_next(state, inc)
    return state, inc


@njit(cache=True)
def _mix64(x):
    """splitmix64 finalizer: a bijective 64-bit scramble."""
    z = x + _SM_GAMMA
    z = (z ^ (z >> np.uint64(30))) * _SM_M1
    z = (z ^ (z >> np.uint64(27))) * _SM_M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _seed_stream(pixel_index, sample_index, global_seed):
    """Decorrelated stream for one (pixel, sample) pair.

    increment = 2 * mix(pixel) + 1; the seeding ritual folds the increment
    into the state, so first draws differ across pixels as well."""
    init_state = _mix64(global_seed ^ _mix64(sample_index))
    init_seq = _mix64(pixel_index)
    return _pcg_seed(init_state, init_seq)


@njit(cache=True)
def _next_unit(state, inc):
    """Uniform draw in [0, 1): u32 / 2^32."""
    out, state = _pcg_next(state, inc)
    return np.float64(out) * (1.0 / 4294967296.0), state


def pcg_seed(init_state: int, init_seq: int) -> PcgState:
    state, inc = _pcg_seed(np.uint64(init_state & _MASK64), np.uint64(init_seq & _MASK64))
    return PcgState(int(state), int(inc))


def pcg_next_u32(rng: PcgState) -> tuple[int, PcgState]:
    out, state = _pcg_next(np.uint64(rng.state), np.uint64(rng.increment))
    return int(out), PcgState(int(state), rng.increment)


def next_unit_real(rng: PcgState) -> tuple[float, PcgState]:
    out, rng = pcg_next_u32(rng)
    return out * (1.0 / 4294967296.0), rng


def seed_stream(pixel_index: int, sample_index: int, global_seed: int) -> PcgState:
    if pixel_index < 0 or sample_index < 0:
        raise ValueError("pixel_index and sample_index must be non-negative")
    state, inc = _seed_stream(
        np.uint64(pixel_index), np.uint64(sample_index), np.uint64(global_seed & _MASK64)
    )
    return PcgState(int(state), int(inc))
