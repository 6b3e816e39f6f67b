"""
Checkpoint archive.

A checkpoint is one zip archive holding
    manifest.json          format version, dtype, model config, parameter table
    params/NNNN.bin        raw little-endian IEEE-754 values, one blob per
                           parameter, in manifest order

Archive members carry a fixed timestamp so identical parameters produce
byte-identical files.
"""

import json
import logging
import zipfile
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np
import torch

from common.errors import DataError, VersionError
from numerics.optim import ParamStore

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"
_FIXED_DATE = (1980, 1, 1, 0, 0, 0)
_DTYPE_NAMES = {"float32": np.dtype("<f4"), "float64": np.dtype("<f8")}


def _blob_name(index: int) -> str:
    return f"params/{index:04d}.bin"


def _write_member(archive: zipfile.ZipFile, name: str, payload: bytes) -> None:
    info = zipfile.ZipInfo(name, date_time=_FIXED_DATE)
    info.compress_type = zipfile.ZIP_STORED
    info.external_attr = 0o644 << 16
    archive.writestr(info, payload)


def save_checkpoint(
    path: Union[str, Path],
    params: ParamStore,
    model_config: Dict[str, Any],
    extra: Dict[str, Any] = None,
) -> Path:
    """
    Write parameters and config into a self-describing archive.

    Args:
        path: Destination .ckpt path
        params: Parameters to store (in their current dtype)
        model_config: JSON-serializable architecture description
        extra: Optional JSON-serializable metadata (e.g. best epoch)

    Returns:
        Path of the written archive
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    entries = []
    blobs = []
    for index, (name, param) in enumerate(params.items()):
        values = param.detach().cpu().numpy()
        dtype_name = str(values.dtype)
        if dtype_name not in _DTYPE_NAMES:
            raise DataError(f"Unsupported parameter dtype {dtype_name} for '{name}'")
        blob = np.ascontiguousarray(values, dtype=_DTYPE_NAMES[dtype_name]).tobytes()
        entries.append({
            "name": name,
            "shape": list(values.shape),
            "dtype": dtype_name,
            "blob": _blob_name(index),
        })
        blobs.append(blob)

    manifest = {
        "format_version": FORMAT_VERSION,
        "model_config": model_config,
        "parameters": entries,
        "extra": extra or {},
    }

    with zipfile.ZipFile(path, "w") as archive:
        _write_member(archive, MANIFEST_NAME, json.dumps(manifest, indent=2, sort_keys=True).encode("utf-8"))
        for entry, blob in zip(entries, blobs):
            _write_member(archive, entry["blob"], blob)

    logger.info(f"Checkpoint written: {path} ({len(entries)} tensors)")
    return path


def load_checkpoint(path: Union[str, Path]) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
    """
    Read a checkpoint archive.

    Returns:
        (manifest, name -> array) with arrays in manifest order

    Raises:
        VersionError: If the archive has an unknown format version
        DataError: If the archive is unreadable or inconsistent
    """
    path = Path(path)
    try:
        with zipfile.ZipFile(path, "r") as archive:
            manifest = json.loads(archive.read(MANIFEST_NAME).decode("utf-8"))
            version = manifest.get("format_version")
            if version != FORMAT_VERSION:
                raise VersionError(
                    f"Checkpoint {path} has format version {version}, expected {FORMAT_VERSION}"
                )
            arrays: Dict[str, np.ndarray] = {}
            for entry in manifest["parameters"]:
                dtype = _DTYPE_NAMES.get(entry["dtype"])
                if dtype is None:
                    raise DataError(f"Unsupported dtype {entry['dtype']} in {path}")
                raw = archive.read(entry["blob"])
                values = np.frombuffer(raw, dtype=dtype)
                shape = tuple(entry["shape"])
                if values.size != int(np.prod(shape, dtype=np.int64)):
                    raise DataError(f"Blob size mismatch for '{entry['name']}' in {path}")
                arrays[entry["name"]] = values.reshape(shape).copy()
    except (zipfile.BadZipFile, KeyError, json.JSONDecodeError) as exc:
        raise DataError(f"Unreadable checkpoint {path}: {exc}") from exc

    return manifest, arrays


def assign_parameters(params: ParamStore, arrays: Dict[str, np.ndarray]) -> None:
    """
    Copy loaded arrays into the store.

    Raises:
        VersionError: If names or shapes differ from the store's
    """
    expected = params.shapes()
    found = {name: tuple(array.shape) for name, array in arrays.items()}
    if expected != found:
        missing = sorted(set(expected) - set(found))
        unexpected = sorted(set(found) - set(expected))
        reshaped = sorted(n for n in set(expected) & set(found) if expected[n] != found[n])
        raise VersionError(
            "Checkpoint does not match the model architecture "
            f"(missing {missing[:5]}, unexpected {unexpected[:5]}, shape mismatch {reshaped[:5]})"
        )
    with torch.no_grad():
        for name, param in params.items():
            param.copy_(torch.from_numpy(arrays[name]).to(param.dtype))
