"""The four-way outcome scale used by labeling, simulation, and share statistics."""

from __future__ import annotations

from enum import Enum


class Grade(str, Enum):
    GOOD = "Good"
    MEDIOCRE = "Mediocre"
    BAD = "Bad"
    DECLINE = "Decline"


#: label order used everywhere shares are reported
GRADE_ORDER = (Grade.GOOD, Grade.MEDIOCRE, Grade.BAD, Grade.DECLINE)

#: quality criteria a labeled result carries
CRITERIA = ("Overall", "Accuracy", "Completeness", "StyleFormatting")
