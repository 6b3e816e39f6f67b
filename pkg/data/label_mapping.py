"""
Semantic label -> moving/static mapping.

The mapping is an editable JSON config listing each semantic class and
whether it is dynamic. A detection is moving iff its class is dynamic AND it
belongs to a valid track; a dynamic-class detection without a valid track
(a parked car) is static.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Union

from common.errors import ConfigError, MappingError
from data.radar_scan import MOVING, STATIC

DEFAULT_MAPPING_PATH = Path(__file__).parent / "configs" / "radarscenes_label_mapping.json"


@dataclass(frozen=True)
class SemanticClass:
    id: int
    name: str
    dynamic: bool


class LabelMapping:
    """Semantic classes addressable by integer id or by name."""

    def __init__(self, classes: Dict[int, SemanticClass]):
        self.classes = dict(classes)
        self._by_name = {c.name: c for c in self.classes.values()}

    @classmethod
    def from_dict(cls, data: Dict) -> "LabelMapping":
        try:
            classes = {
                int(key): SemanticClass(int(key), str(entry["name"]), bool(entry["dynamic"]))
                for key, entry in data["classes"].items()
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"Malformed label mapping: {exc}") from exc
        return cls(classes)

    @classmethod
    def from_json(cls, path: Union[str, Path] = DEFAULT_MAPPING_PATH) -> "LabelMapping":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def lookup(self, label: Union[int, str]) -> SemanticClass:
        """
        Raises:
            MappingError: If the id or name is not in the mapping
        """
        if isinstance(label, str):
            if label in self._by_name:
                return self._by_name[label]
            raise MappingError(f"Unknown semantic class name '{label}'")
        try:
            return self.classes[int(label)]
        except (KeyError, ValueError) as exc:
            raise MappingError(f"Unknown semantic label id {label!r}") from exc


def load_label_mapping(path: Union[str, Path] = DEFAULT_MAPPING_PATH) -> LabelMapping:
    return LabelMapping.from_json(path)


def map_labels(semantic_label: Union[int, str], track_valid: bool, mapping: LabelMapping) -> int:
    """
    Moving (1) iff the class is dynamic and the track is valid, else static (0).

    Raises:
        MappingError: Unknown label id
    """
    semantic = mapping.lookup(semantic_label)
    return MOVING if (semantic.dynamic and bool(track_valid)) else STATIC
