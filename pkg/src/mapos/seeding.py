"""Deterministic per-role random streams derived from one master seed.

Every stochastic component (channel draw, measurement noise, optimizer,
baseline training positions) gets its own generator keyed by a role id plus
free-form integer indices, so re-seeding one component never shifts another.
"""

import numpy as np

ROLE_CHANNEL = 0
ROLE_NOISE = 1
ROLE_OPTIMIZER = 2
ROLE_TRAINING = 3


def stream(master_seed, *key):
    """Independent Generator for the (role, index, ...) slot under a master seed."""
    seq = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(seq)


def child_seed(master_seed, *key):
    """Integer seed for the slot, for APIs that take a plain seed."""
    seq = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return int(seq.generate_state(1)[0])
