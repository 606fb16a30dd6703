"""
Tests de l'optimiseur AdamW et de la décroissance du taux d'apprentissage
Fichier: tests/test_optim.py
"""
import numpy as np
import pytest

from src.nn.layers import ParamStore
from src.nn.optim import AdamW, adamw_step, decayed_learning_rate
from src.utils.validators import ValidationError


def single_param_store(value):
    store = ParamStore()
    param = store.create("p", (len(value),))
    param.data = np.array(value, dtype=np.float32)
    return store


def test_decayed_learning_rate():
    """Test lr₀·(1 − decay)^epoch"""
    assert decayed_learning_rate(1e-3, 0.1, 0) == pytest.approx(1e-3)
    assert decayed_learning_rate(1e-3, 0.1, 2) == pytest.approx(1e-3 * 0.81)
    assert decayed_learning_rate(5e-4, 0.0, 10) == pytest.approx(5e-4)


def test_first_step_moves_by_learning_rate():
    """Test premier pas: déplacement de lr·signe(g) (moments corrigés)"""
    store = single_param_store([1.0, -2.0])
    adamw_step(store, {"p": np.array([0.5, -3.0])}, lr=0.1, weight_decay=0.0)
    assert np.allclose(store["p"].data, [0.9, -1.9], atol=1e-6)
    assert store.step == 1
    assert np.allclose(store.first_moment["p"], [0.05, -0.3], atol=1e-7)


def test_decoupled_weight_decay():
    """Test décroissance découplée: sans gradient, p ← p·(1 − lr·λ)"""
    store = single_param_store([2.0])
    adamw_step(store, lr=0.1, weight_decay=0.5)
    assert store["p"].data[0] == pytest.approx(2.0 * (1 - 0.05), abs=1e-6)


def test_adamw_uses_param_gradients_by_default():
    store = single_param_store([0.0])
    store["p"].grad = np.array([1.0], dtype=np.float32)
    optimizer = AdamW(store, lr=0.01, weight_decay=0.0, lr_decay=0.5)
    optimizer.step()
    assert store["p"].data[0] == pytest.approx(-0.01, abs=1e-6)
    optimizer.zero_grad()
    assert store["p"].grad is None
    assert optimizer.set_epoch(2) == pytest.approx(0.0025)


def test_adamw_rejects_bad_input():
    """Test nom inconnu, forme incorrecte et betas hors [0, 1)"""
    store = single_param_store([0.0, 0.0])
    with pytest.raises(ValidationError):
        adamw_step(store, {"q": np.zeros(2)})
    with pytest.raises(ValidationError):
        adamw_step(store, {"p": np.zeros(3)})
    with pytest.raises(ValidationError):
        adamw_step(store, {"p": np.zeros(2)}, betas=(0.9, 1.0))


def test_failed_step_leaves_state_untouched():
    """Test gradient mal aligné sur un paramètre ultérieur: pas, moments et données inchangés"""
    store = ParamStore()
    store.create("a", (2,)).data = np.array([1.0, 2.0], dtype=np.float32)
    store.create("b", (3,)).data = np.array([3.0, 4.0, 5.0], dtype=np.float32)
    before = {name: param.data.copy() for name, param in store.items()}
    with pytest.raises(ValidationError):
        adamw_step(store, {"a": np.ones(2), "b": np.ones(5)}, lr=0.1)
    assert store.step == 0
    for name, param in store.items():
        assert np.array_equal(param.data, before[name])
        assert not store.first_moment[name].any()
        assert not store.second_moment[name].any()
    adamw_step(store, {"a": np.ones(2), "b": np.ones(3)}, lr=0.1)
    assert store.step == 1

def test_repeated_steps_descend_quadratic():
    """Test convergence sur une quadratique (gradient 2p)"""
    store = single_param_store([3.0, -4.0])
    for _ in range(300):
        adamw_step(store, {"p": 2.0 * store["p"].data}, lr=0.05, weight_decay=0.0)
    assert np.all(np.abs(store["p"].data) < 0.1)
