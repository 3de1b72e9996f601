"""Frozen (reproduced, reference, printed delta) rows for published
policy-benchmark pairs. The printed delta column is the oracle: the
cross-run arithmetic must reproduce every entry exactly at 0.1
granularity. Values are percentages."""

REFERENCE_ROWS = (
    ("diffusion-policy/libero", 70.2, 72.4, "-2.2"),
    ("diffusion-policy/maniskill", 32.4, 30.2, "+2.2"),
    ("diffusion-policy/robotwin", 26.4, 28.0, "-1.6"),
    ("diffusion-policy/aloha", 75.8, 77.5, "-1.7"),
    ("act/robotwin", 30.0, 29.7, "+0.3"),
    ("act/aloha", 72.8, 72.3, "+0.5"),
    ("pi0/libero", 93.6, 94.2, "-0.6"),
    ("pi0/robotwin", 42.6, 46.4, "-3.8"),
    ("pi0/robocasa", 15.2, 14.8, "+0.4"),
    ("pi0.5/libero", 97.0, 96.8, "+0.2"),
    ("pi0.5/robocasa", 18.6, 16.9, "+1.7"),
    ("openvla/libero", 78.2, 76.5, "+1.7"),
    ("openvla/maniskill", 4.0, 4.8, "-0.8"),
    ("smolvla/libero", 88.2, 87.3, "+0.9"),
    ("cosmos-policy/libero", 98.4, 98.5, "-0.1"),
    ("cosmos-policy/robocasa", 66.7, 67.1, "-0.4"),
    ("motus/robotwin", 86.9, 87.0, "-0.1"),
)

assert len(REFERENCE_ROWS) == 17
