"""
mfaudit: a workbench for auditing multi-factor authentication protocols
against an adversary who controls the channel and holds N-1 factors.

"""

__version__ = "1.0.0"
