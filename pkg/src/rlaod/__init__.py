"""Active object detection: two DQN agents adjust image brightness and scale
so that a fixed detector performs as well as it can."""

__version__ = "0.1.0"
