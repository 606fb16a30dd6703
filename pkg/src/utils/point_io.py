"""
Entrées/sorties de nuages de points - PLY ASCII et XYZ texte

Ce module lit et écrit les fichiers de points du pipeline:

Formats supportés:
    - PLY ASCII 1.0: élément vertex avec propriétés x, y, z et couleurs
      red, green, blue facultatives; les autres éléments sont ignorés
    - XYZ: une ligne "x y z" par point, lignes vides et commentaires (#)
      ignorés, colonnes supplémentaires ignorées

Écriture:
    Coordonnées au format .9g (9 chiffres significatifs). Un nuage
    étiqueté est écrit avec une couleur par rôle (interface en magenta).
    À la relecture, les couleurs connues redonnent les étiquettes.

Erreurs:
    - PointFileError: fichier absent ou illisible/inscriptible (code 2)
    - PointFileParseError: contenu invalide, avec numéro de ligne (code 3)

Fichier: src/utils/point_io.py
"""

import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from src.config.messages import FILE_MESSAGES
from src.models.point_cloud import PointCloud, PointLabel


PathLike = Union[str, Path]

LABEL_COLORS: Dict[PointLabel, Tuple[int, int, int]] = {
    PointLabel.PARTIAL: (170, 170, 170),
    PointLabel.MISSING: (60, 120, 220),
    PointLabel.INTERFACE: (255, 0, 255),
    PointLabel.PREDICTED: (240, 160, 40),
}
_COLOR_LABELS = {color: label for label, color in LABEL_COLORS.items()}


class PointFileError(Exception):
    """Erreur d'entrée/sortie sur un fichier (absent, illisible, non inscriptible)."""

    def __init__(self, message: str, path: PathLike = ""):
        super().__init__(message)
        self.path = str(path)


class PointFileParseError(PointFileError):
    """Contenu de fichier invalide; line est le numéro de ligne (à partir de 1)."""

    def __init__(self, path: PathLike, line: int, detail: str):
        super().__init__(FILE_MESSAGES["parse_error"].format(path=path, line=line, detail=detail), path)
        self.line = line
        self.detail = detail


def _read_lines(path: PathLike) -> List[str]:
    path = Path(path)
    if not path.is_file():
        raise PointFileError(FILE_MESSAGES["not_found"].format(path=path), path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise PointFileError(FILE_MESSAGES["unreadable"].format(path=path, error=e), path)
    try:
        return data.decode("utf-8").splitlines()
    except UnicodeDecodeError as e:
        line = data[:e.start].count(b"\n") + 1
        raise PointFileParseError(path, line, FILE_MESSAGES["not_utf8"].format(byte=data[e.start]))


def _parse_float(path: PathLike, line_number: int, token: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise PointFileParseError(path, line_number, FILE_MESSAGES["not_a_number"].format(value=token))
    if not math.isfinite(value):
        raise PointFileParseError(path, line_number, FILE_MESSAGES["not_finite"].format(value=token))
    return value


def _labels_from_colors(colors: List[Tuple[int, int, int]]) -> Optional[np.ndarray]:
    labels = [_COLOR_LABELS.get(color) for color in colors]
    if not labels or any(label is None for label in labels):
        return None
    return np.array([int(label) for label in labels], dtype=np.int8)


def read_ply(path: PathLike) -> PointCloud:
    """
    Lire un fichier PLY ASCII.

    Returns:
        PointCloud: Coordonnées en float64; étiquettes si toutes les
            couleurs correspondent à un rôle connu

    Raises:
        PointFileError: Fichier absent ou illisible
        PointFileParseError: En-tête ou ligne de sommet invalide
    """
    lines = _read_lines(path)
    if not lines or lines[0].strip() != "ply":
        raise PointFileParseError(path, 1, FILE_MESSAGES["ply_magic"])
    vertex_count: Optional[int] = None
    properties: List[str] = []
    current_element = None
    header_end = None
    for number, raw in enumerate(lines[1:], start=2):
        tokens = raw.split()
        if not tokens or tokens[0] in ("comment", "obj_info"):
            continue
        if tokens[0] == "format":
            if tokens[1:] != ["ascii", "1.0"]:
                raise PointFileParseError(path, number, FILE_MESSAGES["ply_format"])
        elif tokens[0] == "element":
            current_element = tokens[1] if len(tokens) > 1 else None
            if current_element == "vertex":
                try:
                    vertex_count = int(tokens[2])
                except (IndexError, ValueError):
                    raise PointFileParseError(path, number, FILE_MESSAGES["ply_vertex_missing"])
        elif tokens[0] == "property":
            if current_element == "vertex":
                properties.append(tokens[-1])
        elif tokens[0] == "end_header":
            header_end = number
            break
    if header_end is None:
        raise PointFileParseError(path, len(lines), FILE_MESSAGES["ply_header_end"])
    if vertex_count is None:
        raise PointFileParseError(path, header_end, FILE_MESSAGES["ply_vertex_missing"])
    if not {"x", "y", "z"} <= set(properties):
        raise PointFileParseError(path, header_end, FILE_MESSAGES["ply_property_missing"])
    axes = [properties.index(axis) for axis in ("x", "y", "z")]
    color_axes = ([properties.index(c) for c in ("red", "green", "blue")]
                  if {"red", "green", "blue"} <= set(properties) else None)

    points = np.empty((vertex_count, 3), dtype=np.float64)
    colors: List[Tuple[int, int, int]] = []
    body = lines[header_end:header_end + vertex_count]
    if len(body) < vertex_count:
        raise PointFileParseError(path, header_end + len(body) + 1, FILE_MESSAGES["ply_count"].format(
            expected=vertex_count, actual=len(body)))
    for offset, raw in enumerate(body):
        number = header_end + offset + 1
        tokens = raw.split()
        if len(tokens) < len(properties):
            raise PointFileParseError(path, number, FILE_MESSAGES["field_count"].format(
                expected=len(properties), actual=len(tokens)))
        points[offset] = [_parse_float(path, number, tokens[axis]) for axis in axes]
        if color_axes is not None:
            colors.append(tuple(int(_parse_float(path, number, tokens[axis])) for axis in color_axes))
    labels = _labels_from_colors(colors) if color_axes is not None else None
    return PointCloud(points, labels)


def read_xyz(path: PathLike) -> PointCloud:
    """
    Lire un fichier XYZ texte.

    Raises:
        PointFileParseError: Ligne invalide ou fichier sans aucun point
    """
    lines = _read_lines(path)
    rows = []
    for number, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.replace(",", " ").split()
        if len(tokens) < 3:
            raise PointFileParseError(path, number, FILE_MESSAGES["field_count"].format(
                expected=3, actual=len(tokens)))
        rows.append([_parse_float(path, number, token) for token in tokens[:3]])
    if not rows:
        raise PointFileParseError(path, max(len(lines), 1), FILE_MESSAGES["field_count"].format(
            expected=3, actual=0))
    return PointCloud(np.array(rows, dtype=np.float64))


def read_points(path: PathLike) -> PointCloud:
    """
    Lire un nuage selon l'extension (.ply ou .xyz/.txt).

    Un fichier PLY sans aucun sommet est refusé comme un fichier vide.
    """
    suffix = Path(path).suffix.lower()
    if suffix == ".ply":
        cloud = read_ply(path)
        if cloud.count == 0:
            raise PointFileParseError(path, 1, FILE_MESSAGES["ply_count"].format(expected=">0", actual=0))
        return cloud
    if suffix in (".xyz", ".txt", ".pts"):
        return read_xyz(path)
    raise PointFileError(FILE_MESSAGES["extension_unknown"].format(path=path), path)


def _format_row(point: np.ndarray) -> str:
    return " ".join(format(float(value), ".9g") for value in point)


def _write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise PointFileError(FILE_MESSAGES["unwritable"].format(path=path, error=e), path)
    return path


def write_ply(path: PathLike, cloud: PointCloud, colors: bool = True) -> Path:
    """
    Écrire un nuage en PLY ASCII.

    Args:
        path: Fichier de sortie (dossiers parents créés)
        cloud: Nuage à écrire
        colors: Écrire les couleurs de rôle si le nuage est étiqueté

    Raises:
        PointFileError: Écriture impossible
    """
    with_colors = colors and cloud.labels is not None
    header = ["ply", "format ascii 1.0", f"element vertex {cloud.count}",
              "property double x", "property double y", "property double z"]
    if with_colors:
        header += ["property uchar red", "property uchar green", "property uchar blue"]
    header.append("end_header")
    rows = []
    for index, point in enumerate(cloud.points):
        row = _format_row(point)
        if with_colors:
            red, green, blue = LABEL_COLORS[PointLabel(int(cloud.labels[index]))]
            row = f"{row} {red} {green} {blue}"
        rows.append(row)
    return _write_text(path, "\n".join(header + rows) + "\n")


def write_xyz(path: PathLike, cloud: PointCloud) -> Path:
    """Écrire un nuage en XYZ texte."""
    return _write_text(path, "".join(_format_row(point) + "\n" for point in cloud.points))


def write_points(path: PathLike, cloud: PointCloud, fmt: str = "ply") -> Path:
    """Écrire selon le format demandé (ply ou xyz)."""
    if fmt == "xyz":
        return write_xyz(path, cloud)
    return write_ply(path, cloud)
