from config.settings import settings
from config.constants import ENCODERS, ANSATZE, DIAGNOSTIC_ANSATZE, REDUCED_ANSATZE

__all__ = ["settings", "ENCODERS", "ANSATZE", "DIAGNOSTIC_ANSATZE", "REDUCED_ANSATZE"]
