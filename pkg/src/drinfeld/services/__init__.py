"""
Service layer.

Orchestration shared by the command line: profiles, verification suites
and tower tables. The arithmetic lives in src.drinfeld.
"""

from src.drinfeld.services.config_service import ConfigService, ProfileSummary
from src.drinfeld.services.tower_service import TowerService, counts_csv, genus_csv
from src.drinfeld.services.verification_service import VerificationOutcome, VerificationService

__all__ = [
    "ConfigService",
    "ProfileSummary",
    "TowerService",
    "VerificationService",
    "VerificationOutcome",
    "counts_csv",
    "genus_csv",
]
