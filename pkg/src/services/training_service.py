"""
Service d'entraînement et d'évaluation SPAC-Net

Ce module orchestre le générateur autour des échantillons d'occlusion:

Fonctionnalités principales:
    - Préparation: localisation de l'interface (ramenée à n_t points) et
      cible grossière FPS de la partie manquante, calculées une fois
    - Entraînement: ordre des échantillons tiré par époque avec la graine,
      passe avant, perte jointe, rétro-propagation, pas AdamW, taux
      décroissant lr₀·(1 − decay)^époque
    - Traces: loss_trace.json (une entrée par époque) et checkpoints
      périodiques dans le dossier de sortie
    - Échec numérique: une perte non finie interrompt l'entraînement,
      l'échantillon fautif est vidé dans numeric_failure.json
    - Évaluation: passes avant séquentielles puis métriques par
      échantillon calculées en parallèle
    - Complétion d'un scan quelconque (réduction FPS à n_input si besoin)

Déterminisme:
    Deux entraînements de même graine produisent des checkpoints
    identiques à l'octet près.

Fichier: src/services/training_service.py
"""

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from src.config.messages import FILE_MESSAGES, TRAIN_MESSAGES, VALIDATION_MESSAGES
from src.models.interface import InterfaceConfig, InterfaceMode, InterfaceResult
from src.models.metric_report import AggregateReport
from src.models.model_config import ModelConfig, TrainConfig
from src.models.occlusion_sample import OcclusionSample
from src.models.point_cloud import Point3, PointCloud
from src.models.spacnet import ForwardOutput, SPACNet, coarse_target, joint_loss
from src.nn.optim import AdamW
from src.nn.tensor import GradTape, NumericError, nan_check
from src.services import metrics_service
from src.services.geometry_service import farthest_point_indices
from src.services.interface_service import (fit_interface_size, localize_by_downsampling,
                                            localize_by_edges, localize_by_occlusion,
                                            localize_sample)
from src.services.logging_service import logger
from src.utils.checkpoint_utils import config_hash, load_checkpoint, save_checkpoint
from src.utils.point_io import PointFileError
from src.utils.seed_utils import make_rng
from src.utils.validators import ValidationError


LOSS_TRACE_NAME = "loss_trace.json"
FAILURE_DUMP_NAME = "numeric_failure.json"
FINAL_CHECKPOINT_NAME = "final.ckpt"


@dataclass
class PreparedSample:
    """Échantillon prêt pour le réseau: interface de taille n_t et cible grossière."""
    sample: OcclusionSample
    interface: InterfaceResult
    target_coarse: np.ndarray


@dataclass
class EpochRecord:
    """Moyennes d'une époque d'entraînement."""
    epoch: int
    lr: float
    loss: float
    partial: float
    complete: float


@dataclass
class TrainingResult:
    """Modèle entraîné, trace des pertes et dernier checkpoint écrit."""
    model: SPACNet
    trace: List[EpochRecord] = field(default_factory=list)
    checkpoint_path: Optional[Path] = None

    @property
    def final_loss(self) -> float:
        return self.trace[-1].loss if self.trace else float("nan")


class TrainingService:
    """
    Entraîner, évaluer et appliquer un générateur SPAC-Net.

    Args:
        model_config: Hyper-paramètres du générateur
        interface_config: Localisation de l'interface (n_t identique au modèle)
        train_config: Paramètres de la boucle d'entraînement
        on_epoch: Rappel facultatif appelé avec chaque EpochRecord
    """

    def __init__(self, model_config: ModelConfig, interface_config: Optional[InterfaceConfig] = None,
                 train_config: Optional[TrainConfig] = None,
                 on_epoch: Optional[Callable[[EpochRecord], None]] = None):
        self.model_config = model_config
        self.interface_config = interface_config or InterfaceConfig(
            InterfaceMode.OCCLUSION_POINT, n_t=model_config.n_t)
        self.train_config = train_config or TrainConfig()
        self.on_epoch = on_epoch
        if self.interface_config.n_t != model_config.n_t:
            raise ValidationError(VALIDATION_MESSAGES["config_invalid"].format(
                detail=f"interface.n_t={self.interface_config.n_t} ≠ model.n_t={model_config.n_t}"))

    # ===== PRÉPARATION =====

    def build_model(self) -> SPACNet:
        return SPACNet(self.model_config, seed=self.train_config.seed)

    def prepare(self, samples: Sequence[OcclusionSample]) -> List[PreparedSample]:
        """
        Localiser l'interface et calculer la cible grossière de chaque échantillon.

        Raises:
            ValidationError: Jeu vide ou partiel de taille différente de n_input
        """
        if not samples:
            raise ValidationError(VALIDATION_MESSAGES["dataset_empty"].format(split="entrée"))
        prepared = []
        for sample in samples:
            interface = fit_interface_size(sample.partial, localize_sample(sample, self.interface_config),
                                           self.model_config.n_t)
            prepared.append(PreparedSample(sample, interface,
                                           coarse_target(sample.missing, self.model_config.n_t)))
        return prepared

    # ===== ENTRAÎNEMENT =====

    def _dump_failure(self, directory: Optional[Path], item: PreparedSample, epoch: int,
                      step: int, error: NumericError) -> None:
        record = dict(item.sample.describe(), epoch=epoch, step=step, op=error.op,
                      message=str(error))
        logger.log_numeric_failure(item.sample.sample_id, error.op, record)
        if directory is None:
            return
        path = directory / FAILURE_DUMP_NAME
        try:
            directory.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as e:
            raise PointFileError(FILE_MESSAGES["unwritable"].format(path=path, error=e), path)

    def _step(self, model: SPACNet, optimizer: AdamW, item: PreparedSample) -> dict:
        with nan_check(self.train_config.nan_check):
            with GradTape() as tape:
                out = model.forward(item.sample.partial, item.interface)
                loss, parts = joint_loss(out, item.sample.missing, self.train_config,
                                         item.target_coarse)
            if not math.isfinite(parts["total"]):
                raise NumericError(TRAIN_MESSAGES["numeric_failure"].format(
                    step=model.store.step + 1, op="joint_loss"), op="joint_loss")
            tape.backward(loss)
            optimizer.step()
            optimizer.zero_grad()
        return parts

    def _write_trace(self, directory: Path, trace: List[EpochRecord]) -> Path:
        path = directory / LOSS_TRACE_NAME
        try:
            directory.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps([asdict(record) for record in trace], indent=2,
                                       sort_keys=True) + "\n", encoding="utf-8")
        except OSError as e:
            raise PointFileError(FILE_MESSAGES["unwritable"].format(path=path, error=e), path)
        return path

    def train(self, samples: Sequence[OcclusionSample], checkpoint_dir: Union[str, Path, None] = None,
              model: Optional[SPACNet] = None) -> TrainingResult:
        """
        Entraîner un générateur sur des échantillons.

        Args:
            samples: Échantillons d'entraînement (non vide)
            checkpoint_dir: Dossier des checkpoints, de loss_trace.json et du
                vidage d'échec numérique (rien n'est écrit si None)
            model: Modèle à poursuivre (nouveau modèle sinon)

        Returns:
            TrainingResult

        Raises:
            ValidationError: Jeu vide ou tailles incompatibles
            NumericError: Perte non finie (sample_id renseigné)
        """
        prepared = self.prepare(samples)
        model = model or self.build_model()
        cfg = self.train_config
        optimizer = AdamW(model.store, lr=cfg.learning_rate, weight_decay=cfg.weight_decay,
                          betas=cfg.betas, eps=cfg.eps, lr_decay=cfg.lr_decay)
        directory = None if checkpoint_dir is None else Path(checkpoint_dir)
        result = TrainingResult(model)
        config = self.model_config.to_dict()
        logger.set_run_context("train", cfg.seed, config_hash(config))

        for epoch in range(cfg.epochs):
            lr = optimizer.set_epoch(epoch)
            order = make_rng(cfg.seed, epoch).permutation(len(prepared))
            totals = {"total": 0.0, "partial": 0.0, "complete": 0.0}
            for index in order:
                item = prepared[int(index)]
                try:
                    parts = self._step(model, optimizer, item)
                except NumericError as e:
                    e.sample_id = item.sample.sample_id
                    self._dump_failure(directory, item, epoch, model.store.step, e)
                    raise
                for name in totals:
                    totals[name] += parts[name]
            count = float(len(prepared))
            record = EpochRecord(epoch, lr, totals["total"] / count, totals["partial"] / count,
                                 totals["complete"] / count)
            result.trace.append(record)
            logger.log_epoch(epoch, record.loss, lr)
            if self.on_epoch is not None:
                self.on_epoch(record)
            if directory is not None and cfg.checkpoint_every and (epoch + 1) % cfg.checkpoint_every == 0:
                path = save_checkpoint(directory / f"epoch_{epoch + 1:04d}.ckpt", model.store, config,
                                       epoch + 1)
                logger.log_checkpoint_saved(str(path), epoch + 1)
                result.checkpoint_path = path

        if directory is not None:
            self._write_trace(directory, result.trace)
            result.checkpoint_path = save_checkpoint(directory / FINAL_CHECKPOINT_NAME, model.store,
                                                     config, cfg.epochs)
            logger.log_checkpoint_saved(str(result.checkpoint_path), cfg.epochs)
        return result

    @staticmethod
    def load_model(path: Union[str, Path], expected_config: Optional[ModelConfig] = None) -> SPACNet:
        """
        Recharger un générateur depuis un checkpoint.

        Raises:
            PointFileError: Fichier absent
            PointFileParseError: Checkpoint invalide ou configuration différente
        """
        checkpoint = load_checkpoint(path, None if expected_config is None else expected_config.to_dict())
        model = SPACNet(ModelConfig.from_dict(checkpoint.config))
        checkpoint.restore(model.store)
        return model

    # ===== INFÉRENCE ET ÉVALUATION =====

    def missing_chamfer(self, model: SPACNet, samples: Sequence[OcclusionSample]) -> float:
        """CD-ℓ2 moyen entre M′ et la partie manquante (critère de sur-apprentissage)."""
        values = []
        for item in self.prepare(samples):
            out = model.forward(item.sample.partial, item.interface)
            values.append(metrics_service.chamfer_l2(out.missing_pred, item.sample.missing))
        return float(np.mean(values))

    def evaluate(self, model: SPACNet, samples: Sequence[OcclusionSample],
                 library: Optional[Sequence[PointCloud]] = None,
                 workers: Optional[int] = None) -> AggregateReport:
        """
        Évaluer la complétion sur un jeu d'échantillons.

        Chaque nuage complet est comparé à la vérité terrain complète
        (CD-ℓ1, CD-ℓ2, F-Score@1%), la Fidelity mesure la conservation du
        partiel et la MMD est calculée si une bibliothèque est fournie.
        """
        jobs = []
        for item in self.prepare(samples):
            out = model.forward(item.sample.partial, item.interface)
            jobs.append((out.complete, item.sample))

        def evaluate_job(job):
            complete, sample = job
            return metrics_service.evaluate_prediction(
                complete, sample.ground_truth, partial=sample.partial, library=library,
                sample_id=sample.sample_id, difficulty=sample.difficulty)

        report = AggregateReport(metrics_service.evaluate_many(jobs, evaluate_job, workers))
        logger.log_evaluation(report.columns(), report.sample_count)
        return report

    def locate_interface(self, partial: PointCloud,
                         occlusion_point: Optional[Point3] = None) -> InterfaceResult:
        """
        Localiser l'interface d'un scan sans vérité terrain.

        Raises:
            ValidationError: Mode occlusion sans point d'occlusion
        """
        cfg = self.interface_config
        if cfg.mode is InterfaceMode.OCCLUSION_POINT:
            if occlusion_point is None:
                raise ValidationError(VALIDATION_MESSAGES["occlusion_point_required"])
            return localize_by_occlusion(partial, occlusion_point, cfg.n_t)
        if cfg.mode is InterfaceMode.EDGE_DETECTION:
            return fit_interface_size(partial, localize_by_edges(partial, cfg), cfg.n_t)
        return localize_by_downsampling(partial, cfg.n_t)

    def complete(self, model: SPACNet, partial: PointCloud,
                 occlusion_point: Optional[Point3] = None) -> ForwardOutput:
        """
        Compléter un scan partiel quelconque.

        Un scan plus grand que n_input est réduit par FPS (départ à
        l'indice 0); un scan plus petit est refusé.

        Raises:
            ValidationError: Scan trop petit ou point d'occlusion manquant
        """
        n_input = model.config.n_input
        if partial.count < n_input:
            raise ValidationError(VALIDATION_MESSAGES["cloud_too_small"].format(
                count=partial.count, minimum=n_input))
        if partial.count > n_input:
            partial = partial.subset(np.sort(farthest_point_indices(partial.points, n_input, 0)))
        partial = PointCloud(partial.points)
        return model.forward(partial, self.locate_interface(partial, occlusion_point))
