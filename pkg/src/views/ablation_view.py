"""
Vue d'ablation - Commande ablate

Fichier: src/views/ablation_view.py
"""

from typing import Optional

from src.config.messages import EVAL_MESSAGES
from src.controllers.ablation_controller import AblationController
from .base_view import BaseView


class AblationView(BaseView):
    """Vue de la commande ablate."""

    def __init__(self, json_output: bool = False):
        super().__init__(json_output)
        self.controller = AblationController()

    def ablate_command(self, study: str, manifest_path: Optional[str] = None,
                       seed: Optional[int] = None, seeds: int = 3,
                       epochs: Optional[int] = None, radius: Optional[float] = None):
        self.run(self._ablate, study, manifest_path, seed, seeds, epochs, radius)

    def _ablate(self, study, manifest_path, seed, seeds, epochs, radius):
        manifest = self.controller.load_manifest(manifest_path, seed, epochs=epochs)
        self.display_header(EVAL_MESSAGES["ablation_header"])
        with self.status(EVAL_MESSAGES["progress"]):
            result = self.controller.run(study, manifest, seeds, radius)

        if self.json_output:
            self.display_json(result)
            return

        if study == "delta":
            self.display_table(
                f"δ ({len(result['seeds'])} graines)",
                [{"name": "δ", "style": "cyan", "justify": "right"},
                 {"name": "Rappel", "style": "green", "justify": "right"},
                 {"name": "Faux positifs", "style": "red", "justify": "right"}],
                [[f"{row['delta']:.2f}", self.format_value(row["recall"]),
                  self.format_value(row["false_positive_rate"])] for row in result["deltas"]],
            )
            return

        self.display_table(
            EVAL_MESSAGES["ablation_table_title"],
            [{"name": "Variante", "style": "cyan"},
             {"name": "CD-ℓ2 moyen", "style": "green", "justify": "right"}],
            [[variant, self.format_value(value * 1000, 2)]
             for variant, value in result["summary"].items()],
        )
