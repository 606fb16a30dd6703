"""
Tests de lecture/écriture des nuages de points (PLY ASCII, XYZ)
Fichier: tests/test_point_io.py
"""
import unittest
import tempfile
from pathlib import Path

import numpy as np
import pytest

from src.models.point_cloud import PointCloud, PointLabel
from src.utils.point_io import (
    LABEL_COLORS, PointFileError, PointFileParseError, read_ply, read_points, read_xyz, write_ply,
    write_points, write_xyz,
)


def labeled_cloud():
    points = np.random.default_rng(0).uniform(-0.5, 0.5, size=(6, 3))
    labels = [PointLabel.PARTIAL, PointLabel.PARTIAL, PointLabel.INTERFACE,
              PointLabel.MISSING, PointLabel.PREDICTED, PointLabel.PARTIAL]
    return PointCloud(points, labels).single_precision()


class TestPlyRoundTrip(unittest.TestCase):
    """Tests d'écriture puis relecture PLY"""

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.path = Path(self.directory.name) / "cloud.ply"

    def tearDown(self):
        self.directory.cleanup()

    def test_labels_and_single_precision_values_survive(self):
        """Test coordonnées float32 exactes et étiquettes retrouvées par couleur"""
        cloud = labeled_cloud()
        write_ply(self.path, cloud)
        loaded = read_ply(self.path)
        self.assertTrue(np.array_equal(loaded.single_precision().points, cloud.points))
        self.assertTrue(np.array_equal(loaded.labels, cloud.labels))

    def test_interface_written_in_magenta(self):
        write_ply(self.path, labeled_cloud())
        rows = self.path.read_text().splitlines()
        body = rows[rows.index("end_header") + 1:]
        self.assertTrue(body[2].endswith("255 0 255"))
        self.assertEqual(LABEL_COLORS[PointLabel.INTERFACE], (255, 0, 255))

    def test_without_colors_has_no_labels(self):
        write_ply(self.path, labeled_cloud(), colors=False)
        loaded = read_ply(self.path)
        self.assertIsNone(loaded.labels)
        self.assertEqual(loaded.count, 6)

    def test_unknown_colors_drop_labels(self):
        """Test couleur hors palette: nuage sans étiquettes"""
        self.path.write_text("ply\nformat ascii 1.0\nelement vertex 2\n"
                             "property float x\nproperty float y\nproperty float z\n"
                             "property uchar red\nproperty uchar green\nproperty uchar blue\n"
                             "end_header\n0 0 0 255 0 255\n1 1 1 1 2 3\n")
        loaded = read_ply(self.path)
        self.assertIsNone(loaded.labels)
        self.assertTrue(np.array_equal(loaded.points[1], [1.0, 1.0, 1.0]))


def test_ply_ignores_other_elements(tmp_path):
    path = tmp_path / "faces.ply"
    path.write_text("ply\nformat ascii 1.0\ncomment généré\nelement vertex 1\n"
                    "property float x\nproperty float y\nproperty float z\n"
                    "element face 0\nproperty list uchar int vertex_indices\n"
                    "end_header\n0.5 -0.25 1\n")
    assert np.array_equal(read_ply(path).points, [[0.5, -0.25, 1.0]])


def test_xyz_round_trip_and_separators(tmp_path):
    """Test XYZ: virgules, commentaires, colonnes supplémentaires"""
    path = tmp_path / "cloud.xyz"
    path.write_text("# scan\n\n1, 2, 3\n4 5 6 0.9\n")
    loaded = read_xyz(path)
    assert np.array_equal(loaded.points, [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])

    cloud = labeled_cloud()
    write_xyz(tmp_path / "out.xyz", cloud)
    again = read_points(tmp_path / "out.xyz")
    assert np.array_equal(again.single_precision().points, cloud.points)
    assert again.labels is None


@pytest.mark.parametrize("content, line", [
    ("plx\n", 1),
    ("ply\nformat binary_little_endian 1.0\nend_header\n", 2),
    ("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
     "property float z\nend_header\n0 abc 0\n", 8),
    ("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
     "property float z\nend_header\n0 nan 0\n", 8),
    ("ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\n"
     "property float z\nend_header\n0 0 0\n1 1 1\n", 10),
    ("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
     "property float z\n", 6),
])
def test_ply_parse_errors_report_line(tmp_path, content, line):
    """Test erreurs d'analyse PLY avec numéro de ligne"""
    path = tmp_path / "bad.ply"
    path.write_text(content)
    with pytest.raises(PointFileParseError) as excinfo:
        read_ply(path)
    assert excinfo.value.line == line
    assert str(path) in str(excinfo.value)


def test_non_utf8_bytes_are_a_parse_error(tmp_path):
    """Test octets hors UTF-8: erreur d'analyse avec la ligne fautive"""
    path = tmp_path / "binary.ply"
    path.write_bytes(b"ply\nformat ascii 1.0\n\xff\xfe\x00\n")
    with pytest.raises(PointFileParseError) as excinfo:
        read_ply(path)
    assert excinfo.value.line == 3
    assert "0xff" in str(excinfo.value)

    xyz = tmp_path / "binary.xyz"
    xyz.write_bytes(b"0 0 0\n\x80 1 1\n")
    with pytest.raises(PointFileParseError) as excinfo:
        read_xyz(xyz)
    assert excinfo.value.line == 2


def test_xyz_parse_errors(tmp_path):
    path = tmp_path / "bad.xyz"
    path.write_text("0 0 0\n1 1\n")
    with pytest.raises(PointFileParseError) as excinfo:
        read_xyz(path)
    assert excinfo.value.line == 2

    path.write_text("# rien\n")
    with pytest.raises(PointFileParseError):
        read_xyz(path)


def test_missing_file_and_unknown_extension(tmp_path):
    """Test fichier absent et extension inconnue: erreurs d'entrée/sortie"""
    with pytest.raises(PointFileError) as excinfo:
        read_points(tmp_path / "absent.ply")
    assert not isinstance(excinfo.value, PointFileParseError)

    other = tmp_path / "cloud.obj"
    other.write_text("v 0 0 0\n")
    with pytest.raises(PointFileError) as excinfo:
        read_points(other)
    assert not isinstance(excinfo.value, PointFileParseError)


def test_empty_ply_rejected_by_read_points(tmp_path):
    path = tmp_path / "empty.ply"
    path.write_text("ply\nformat ascii 1.0\nelement vertex 0\nproperty float x\n"
                    "property float y\nproperty float z\nend_header\n")
    assert read_ply(path).count == 0
    with pytest.raises(PointFileParseError):
        read_points(path)


def test_write_points_dispatches_on_format(tmp_path):
    cloud = labeled_cloud()
    assert write_points(tmp_path / "a" / "c.ply", cloud).read_text().startswith("ply\n")
    text = write_points(tmp_path / "c.xyz", cloud, fmt="xyz").read_text()
    assert len(text.splitlines()) == 6
