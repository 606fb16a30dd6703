"""
Tests du format de checkpoint (écriture, relecture, contrôles d'intégrité)
Fichier: tests/test_checkpoint.py
"""
import struct
import unittest

import numpy as np
import pytest

from src.nn.layers import Linear, ParamStore
from src.nn.optim import adamw_step
from src.utils.checkpoint_utils import (
    FORMAT_VERSION, MAGIC, config_hash, decode_checkpoint, encode_checkpoint, load_checkpoint,
    save_checkpoint,
)
from src.utils.point_io import PointFileError, PointFileParseError


def trained_store(seed=0):
    store = ParamStore(seed=seed)
    Linear(store, "a", 3, 4)
    Linear(store, "b", 4, 2)
    grads = {name: np.full(store[name].shape, 0.5) for name in store.names()}
    adamw_step(store, grads, lr=0.01)
    return store


class TestCheckpoint(unittest.TestCase):
    """Tests d'écriture et de relecture des checkpoints"""

    def setUp(self):
        self.config = {"n_input": 64, "n_t": 8}

    def test_round_trip_restores_parameters_and_optimizer(self):
        """Test relecture: paramètres, moments AdamW et compteur de pas"""
        store = trained_store()
        checkpoint = decode_checkpoint(encode_checkpoint(store, self.config, epoch=3))
        self.assertEqual(checkpoint.epoch, 3)
        self.assertEqual(checkpoint.step, 1)
        self.assertEqual(checkpoint.config, self.config)
        self.assertEqual(checkpoint.version, FORMAT_VERSION)

        fresh = ParamStore(seed=99)
        Linear(fresh, "a", 3, 4)
        Linear(fresh, "b", 4, 2)
        checkpoint.restore(fresh)
        for name in store.names():
            self.assertTrue(np.array_equal(fresh[name].data, store[name].data))
            self.assertTrue(np.array_equal(fresh.first_moment[name], store.first_moment[name]))
            self.assertTrue(np.array_equal(fresh.second_moment[name], store.second_moment[name]))
        self.assertEqual(fresh.step, 1)

    def test_without_optimizer_state(self):
        store = trained_store()
        checkpoint = decode_checkpoint(encode_checkpoint(store, self.config, include_optimizer=False))
        self.assertEqual(sorted(checkpoint.arrays), sorted(store.names()))

    def test_encoding_is_deterministic(self):
        """Test octets identiques pour un même registre"""
        self.assertEqual(encode_checkpoint(trained_store(), self.config),
                         encode_checkpoint(trained_store(), self.config))

    def test_restore_rejects_other_architecture(self):
        checkpoint = decode_checkpoint(encode_checkpoint(trained_store(), self.config))
        other = ParamStore()
        Linear(other, "a", 3, 4)
        with self.assertRaises(PointFileParseError):
            checkpoint.restore(other)

    def test_bad_magic_truncation_and_version(self):
        """Test signature, troncature et version invalides"""
        payload = encode_checkpoint(trained_store(), self.config)
        with self.assertRaises(PointFileParseError):
            decode_checkpoint(b"NOTACKPT" + payload[8:])
        with self.assertRaises(PointFileParseError):
            decode_checkpoint(payload[:-10])
        with self.assertRaises(PointFileParseError):
            decode_checkpoint(MAGIC + b"\x01")

        (length,) = struct.unpack("<I", payload[8:12])
        header = payload[12:12 + length].replace(b'"version":1', b'"version":9')
        with self.assertRaises(PointFileParseError):
            decode_checkpoint(payload[:12] + header + payload[12 + length:])


def test_config_hash_ignores_key_order():
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})
    assert len(config_hash({})) == 64


def test_save_and_load_file(tmp_path):
    """Test écriture disque puis relecture avec configuration attendue"""
    config = {"n_input": 64}
    path = save_checkpoint(tmp_path / "nested" / "model.ckpt", trained_store(), config, epoch=2)
    assert path.read_bytes()[:8] == MAGIC
    checkpoint = load_checkpoint(path, expected_config=config)
    assert checkpoint.epoch == 2


def test_load_missing_file_is_io_error(tmp_path):
    """Test fichier absent: erreur d'entrée/sortie, pas d'analyse"""
    with pytest.raises(PointFileError) as excinfo:
        load_checkpoint(tmp_path / "absent.ckpt")
    assert not isinstance(excinfo.value, PointFileParseError)


def test_load_config_mismatch(tmp_path):
    path = save_checkpoint(tmp_path / "model.ckpt", trained_store(), {"n_input": 64})
    with pytest.raises(PointFileParseError):
        load_checkpoint(path, expected_config={"n_input": 128})
