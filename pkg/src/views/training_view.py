"""
Vue d'entraînement et de complétion - Commandes train et complete

Fonctionnalités:
    - train: barre de progression par époque, tableau des dernières
      époques et boîte de succès avec le checkpoint final
    - complete: nombre de points produits et fichier écrit

Fichier: src/views/training_view.py
"""

from dataclasses import asdict
from typing import Optional

from src.config.messages import EVAL_MESSAGES, TRAIN_MESSAGES
from src.controllers.training_controller import TrainingController
from .base_view import BaseView


# nombre d'époques affichées dans le tableau final
TRACE_TAIL = 5


class TrainingView(BaseView):
    """Vue des commandes train et complete."""

    def __init__(self, json_output: bool = False):
        super().__init__(json_output)
        self.controller = TrainingController()

    def train_command(self, manifest_path: Optional[str] = None, seed: Optional[int] = None,
                      output_dir: Optional[str] = None, epochs: Optional[int] = None):
        self.run(self._train, manifest_path, seed, output_dir, epochs)

    def _train(self, manifest_path, seed, output_dir, epochs):
        manifest = self.controller.load_manifest(manifest_path, seed, output_dir, epochs)
        self.display_header(TRAIN_MESSAGES["header"])

        with self.progress() as progress:
            task = progress.add_task(TRAIN_MESSAGES["progress"], total=manifest.train.epochs)
            result = self.controller.train(manifest, on_epoch=lambda record: progress.advance(task))

        if self.json_output:
            self.display_json({
                "checkpoint": str(result.checkpoint_path),
                "epochs": len(result.trace),
                "final_loss": result.final_loss,
                "trace": [asdict(record) for record in result.trace],
            })
            return

        rows = [[record.epoch, f"{record.lr:.2e}", f"{record.loss:.6f}",
                 f"{record.partial:.6f}", f"{record.complete:.6f}"]
                for record in result.trace[-TRACE_TAIL:]]
        self.display_table(
            TRAIN_MESSAGES["header"],
            [{"name": "Époque", "style": "cyan", "justify": "right"},
             {"name": "lr", "justify": "right"},
             {"name": "Perte", "style": "green", "justify": "right"},
             {"name": "Γ partiel", "justify": "right"},
             {"name": "Γ complet", "justify": "right"}],
            rows,
        )
        self.display_success_box(
            TRAIN_MESSAGES["success"].format(epochs=len(result.trace)),
            TRAIN_MESSAGES["checkpoint_saved"].format(path=result.checkpoint_path),
        )

    def complete_command(self, checkpoint: str, input_file: str, mode: Optional[str] = None,
                         delta: Optional[float] = None, radius: Optional[float] = None,
                         occlusion: Optional[str] = None, output: Optional[str] = None,
                         fmt: str = "ply"):
        self.run(self._complete, checkpoint, input_file, mode, delta, radius, occlusion,
                 output, fmt)

    def _complete(self, checkpoint, input_file, mode, delta, radius, occlusion, output, fmt):
        config = self.controller.interface_config(mode=mode, delta=delta, radius=radius)
        point = self.controller.parse_point(occlusion)
        self.display_header(EVAL_MESSAGES["complete_header"])
        out, path = self.controller.complete(checkpoint, input_file, config, point, output, fmt)

        if self.json_output:
            self.display_json({
                "output": str(path),
                "count": out.complete.count,
                "missing_count": out.missing_pred.count,
            })
            return
        self.display_success(EVAL_MESSAGES["completion_written"].format(
            path=path, count=out.complete.count))
