"""
Format binaire des checkpoints

Disposition du fichier:
    1. Signature de 8 octets b"SPACCKPT"
    2. Longueur de l'en-tête: entier non signé 32 bits petit-boutiste
    3. En-tête JSON UTF-8 (clés triées, sans espaces): version du format,
       configuration du modèle, empreinte sha256 de la configuration,
       époque, pas d'optimisation et manifeste des tableaux
       (nom, forme, décalage en octets dans le bloc de données)
    4. Bloc de données: float32 petit-boutiste, tableaux concaténés dans
       l'ordre du manifeste

Le manifeste contient les paramètres puis, si demandé, les moments de
l'optimiseur (noms préfixés par "adam.m." et "adam.v."). L'écriture est
déterministe: deux registres identiques donnent des fichiers identiques
à l'octet près.

Fichier: src/utils/checkpoint_utils.py
"""

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from src.config.messages import FILE_MESSAGES
from src.nn.layers import ParamStore
from src.utils.point_io import PointFileError, PointFileParseError


MAGIC = b"SPACCKPT"
FORMAT_VERSION = 1
_FIRST_MOMENT = "adam.m."
_SECOND_MOMENT = "adam.v."


def config_hash(config: dict) -> str:
    """Empreinte sha256 du JSON canonique (clés triées) d'une configuration."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class Checkpoint:
    """Contenu décodé d'un checkpoint."""
    config: dict
    config_hash: str
    epoch: int
    step: int
    arrays: Dict[str, np.ndarray] = field(default_factory=dict)
    version: int = FORMAT_VERSION

    def parameters(self) -> Dict[str, np.ndarray]:
        return {name: value for name, value in self.arrays.items()
                if not name.startswith((_FIRST_MOMENT, _SECOND_MOMENT))}

    def restore(self, store: ParamStore) -> None:
        """
        Charger paramètres et état d'optimiseur dans un registre compatible.

        Raises:
            PointFileParseError: Si le manifeste ne correspond pas au registre
        """
        parameters = self.parameters()
        if sorted(parameters) != sorted(store.names()):
            missing = sorted(set(store.names()) ^ set(parameters))
            raise PointFileParseError("checkpoint", 0, FILE_MESSAGES["checkpoint_manifest"].format(
                detail=", ".join(missing[:5])))
        try:
            store.load_arrays(parameters)
        except Exception as e:
            raise PointFileParseError("checkpoint", 0, FILE_MESSAGES["checkpoint_manifest"].format(
                detail=str(e)))
        for name in store.names():
            if _FIRST_MOMENT + name in self.arrays:
                store.first_moment[name] = self.arrays[_FIRST_MOMENT + name].copy()
                store.second_moment[name] = self.arrays[_SECOND_MOMENT + name].copy()
        store.step = self.step


def encode_checkpoint(store: ParamStore, config: dict, epoch: int = 0,
                      include_optimizer: bool = True) -> bytes:
    """Sérialiser un registre et sa configuration en octets."""
    arrays: Dict[str, np.ndarray] = dict(store.arrays())
    if include_optimizer:
        for name in store.names():
            arrays[_FIRST_MOMENT + name] = store.first_moment[name]
            arrays[_SECOND_MOMENT + name] = store.second_moment[name]
    manifest: List[dict] = []
    blobs: List[bytes] = []
    offset = 0
    for name, value in arrays.items():
        blob = np.ascontiguousarray(value, dtype="<f4").tobytes()
        manifest.append({"name": name, "shape": list(value.shape), "offset": offset})
        blobs.append(blob)
        offset += len(blob)
    header = {
        "version": FORMAT_VERSION,
        "config": config,
        "config_hash": config_hash(config),
        "epoch": int(epoch),
        "step": int(store.step),
        "arrays": manifest,
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return MAGIC + struct.pack("<I", len(header_bytes)) + header_bytes + b"".join(blobs)


def decode_checkpoint(payload: bytes, source: str = "checkpoint") -> Checkpoint:
    """
    Décoder les octets d'un checkpoint.

    Raises:
        PointFileParseError: Signature, version ou longueurs invalides
    """
    if payload[:len(MAGIC)] != MAGIC:
        raise PointFileParseError(source, 1, FILE_MESSAGES["checkpoint_magic"].format(path=source))
    start = len(MAGIC) + 4
    if len(payload) < start:
        raise PointFileParseError(source, 1, FILE_MESSAGES["checkpoint_truncated"].format(path=source))
    (header_length,) = struct.unpack("<I", payload[len(MAGIC):start])
    try:
        header = json.loads(payload[start:start + header_length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise PointFileParseError(source, 1, FILE_MESSAGES["checkpoint_truncated"].format(path=source))
    if header.get("version") != FORMAT_VERSION:
        raise PointFileParseError(source, 1, FILE_MESSAGES["checkpoint_version"].format(
            version=header.get("version")))
    blob = payload[start + header_length:]
    arrays: Dict[str, np.ndarray] = {}
    for entry in header["arrays"]:
        shape = tuple(entry["shape"])
        size = int(np.prod(shape, dtype=np.int64)) * 4
        begin = entry["offset"]
        if begin + size > len(blob):
            raise PointFileParseError(source, 1, FILE_MESSAGES["checkpoint_truncated"].format(path=source))
        arrays[entry["name"]] = np.frombuffer(blob[begin:begin + size], dtype="<f4").astype(
            np.float32).reshape(shape)
    return Checkpoint(header["config"], header["config_hash"], header["epoch"], header["step"],
                      arrays, header["version"])


def save_checkpoint(path: Union[str, Path], store: ParamStore, config: dict, epoch: int = 0,
                    include_optimizer: bool = True) -> Path:
    """
    Écrire un checkpoint sur disque.

    Raises:
        PointFileError: Écriture impossible
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode_checkpoint(store, config, epoch, include_optimizer))
    except OSError as e:
        raise PointFileError(FILE_MESSAGES["unwritable"].format(path=path, error=e), path)
    return path


def load_checkpoint(path: Union[str, Path], expected_config: Optional[dict] = None) -> Checkpoint:
    """
    Lire un checkpoint, en vérifiant éventuellement sa configuration.

    Raises:
        PointFileError: Fichier absent ou illisible
        PointFileParseError: Contenu invalide ou configuration différente
    """
    path = Path(path)
    if not path.is_file():
        raise PointFileError(FILE_MESSAGES["not_found"].format(path=path), path)
    try:
        payload = path.read_bytes()
    except OSError as e:
        raise PointFileError(FILE_MESSAGES["unreadable"].format(path=path, error=e), path)
    checkpoint = decode_checkpoint(payload, str(path))
    if expected_config is not None and checkpoint.config_hash != config_hash(expected_config):
        raise PointFileParseError(path, 1, FILE_MESSAGES["checkpoint_config"].format(path=path))
    return checkpoint
