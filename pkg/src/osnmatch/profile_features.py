"""User profile records and the profile-similarity feature vector.

A candidate pair is one account on each platform. Its feature vector
holds the normalized similarity of each textual profile field under one
chosen measure, plus the ratio of lifetime post counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import SamePlatformError
from .strsim import Measure, normalized_similarity


class Platform(str, Enum):
    TWITTER = "twitter"
    FLICKR = "flickr"


@dataclass(frozen=True)
class UserProfile:
    """One account's textual and count attributes on one platform."""

    platform: Platform
    user_id: str
    user_name: str = ""
    real_name: str = ""
    description: str = ""
    location: str = ""
    post_count: int = 0

    def __post_init__(self):
        if not self.user_id:
            raise ValueError("user_id must be nonempty")
        if self.post_count < 0:
            raise ValueError(f"post_count must be >= 0, got {self.post_count}")


@dataclass
class PairFeatureVector:
    """Fixed-length numeric features for one candidate pair.

    Every value lies in [0, 1] and is named by the schema entry at the
    same index. ``label`` carries the same-person ground truth when known.
    """

    values: list[float]
    schema: list[str]
    label: bool | None = None

    def __post_init__(self):
        if len(self.values) != len(self.schema):
            raise ValueError(
                f"{len(self.values)} values for {len(self.schema)} schema entries"
            )
        for name, v in zip(self.schema, self.values):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"feature {name} out of [0, 1]: {v}")


PS_TEXT_FIELDS = ("user_name", "real_name", "description", "location")

PS_SCHEMA = [
    "user_name_score",
    "real_name_score",
    "post_ratio",
    "description_score",
    "location_score",
]
PS_SCHEMA_NO_NAMES = PS_SCHEMA[2:]


def text_field_score(measure: Measure, a: str, b: str) -> float:
    """Similarity of one textual field across the pair.

    A field present on only one side scores 0.0; absent on both sides
    counts as equal (1.0).
    """
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    return normalized_similarity(measure, a, b)


def post_count_ratio(count_a: int, count_b: int) -> float:
    """min/max of the two lifetime post counts; two inactive accounts
    are indistinguishable on this axis, so 0/0 maps to 1.0."""
    if count_a == 0 and count_b == 0:
        return 1.0
    return min(count_a, count_b) / max(count_a, count_b)


def extract_ps_features(
    a: UserProfile,
    b: UserProfile,
    measure: Measure,
    include_names: bool = True,
    label: bool | None = None,
) -> PairFeatureVector:
    """Profile-similarity features of a cross-platform pair under one measure."""
    if a.platform == b.platform:
        raise SamePlatformError(
            f"both accounts are on {a.platform.value}: {a.user_id!r}, {b.user_id!r}"
        )
    values = [
        post_count_ratio(a.post_count, b.post_count),
        text_field_score(measure, a.description, b.description),
        text_field_score(measure, a.location, b.location),
    ]
    schema = list(PS_SCHEMA_NO_NAMES)
    if include_names:
        values = [
            text_field_score(measure, a.user_name, b.user_name),
            text_field_score(measure, a.real_name, b.real_name),
        ] + values
        schema = list(PS_SCHEMA)
    return PairFeatureVector(values=values, schema=schema, label=label)


def extract_ps_features_all_measures(
    a: UserProfile,
    b: UserProfile,
    include_names: bool = True,
    label: bool | None = None,
) -> PairFeatureVector:
    """Extension: concatenate every measure's text-field scores (measure-major)
    followed by the single post-count ratio."""
    if a.platform == b.platform:
        raise SamePlatformError(
            f"both accounts are on {a.platform.value}: {a.user_id!r}, {b.user_id!r}"
        )
    fields = PS_TEXT_FIELDS if include_names else PS_TEXT_FIELDS[2:]
    values: list[float] = []
    schema: list[str] = []
    for measure in Measure:
        for field_name in fields:
            values.append(
                text_field_score(measure, getattr(a, field_name), getattr(b, field_name))
            )
            schema.append(f"{field_name}_score_{measure.value}")
    values.append(post_count_ratio(a.post_count, b.post_count))
    schema.append("post_ratio")
    return PairFeatureVector(values=values, schema=schema, label=label)


def featurize_pairs(
    pairs: list[tuple[UserProfile, UserProfile, bool | None]],
    measure: Measure,
    include_names: bool = True,
) -> list[PairFeatureVector]:
    """Order-preserving featurization of labeled profile pairs."""
    return [
        extract_ps_features(a, b, measure, include_names=include_names, label=lbl)
        for a, b, lbl in pairs
    ]
