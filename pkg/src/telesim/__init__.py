"""telesim: connectivity-aware robot teleoperation simulator.

A simulated LiDAR robot is teleoperated over a fault-injectable link;
on link loss it autonomously navigates to its last known goal while the
operator side keeps a predicted virtual twin, reconciled on reconnection.
"""

__version__ = "0.1.0"
