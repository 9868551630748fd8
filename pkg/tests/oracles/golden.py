"""Golden values, frozen from the exact oracles in this directory.

Regenerate with ``python tests/oracles/chau_oracle.py`` and
``python tests/oracles/ss_oracle.py``; ``test_oracles.py`` re-runs both and
checks they still agree with these numbers.
"""

# Chau default instance ([[7,1,3]] + one [[5,1,3]] decoy), identical for
# every decoy placement and for payloads |0> and |1>.
CHAU_HONEST_ACCURACY = 1.0
CHAU_P_STAR = 0.75  # broken after the honest syndrome-correct-decode read
CHAU_Q_STAR = 0.5  # broken after reading all 7 public slots
CHAU_CRUDE_ACCURACY = 1.0
CHAU_DECOY_SLOT_DETECTION = 0.5  # broken after reading only the decoy slot

# Majority read success of an (N, m) block.
READ_SUCCESS = {
    (3, 2): 1.0,
    (9, 4): 31 / 32,
    (15, 7): 1 - 2**-8,
    (25, 12): 1 - 2**-13,
}

# Collective majority attack, averaged over bit and sealing values; detection
# is for SWAP-testing every sealing qubit of the block afterwards.
COLLECTIVE = {
    (3, 2): {"read_success": 1.0, "detect": 0.0, "min_fidelity": 1.0},
    (3, 1): {"read_success": 0.75, "detect": 0.21875, "min_fidelity": 0.25},
    (9, 4): {"read_success": 31 / 32, "detect": 781 / 16384, "min_fidelity": 1 / 32},
}
