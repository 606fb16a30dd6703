"""
Vue de synthèse des jeux de données - Commande synth

Affiche la génération split par split avec une barre de progression, puis
un tableau récapitulatif (forme, nombre d'échantillons par split).

Fichier: src/views/dataset_view.py
"""

from typing import Optional

from src.config.messages import SYNTH_MESSAGES
from src.controllers.dataset_controller import DatasetController
from src.services.dataset_service import SPLITS
from .base_view import BaseView


class DatasetView(BaseView):
    """Vue de la commande synth."""

    def __init__(self, json_output: bool = False):
        super().__init__(json_output)
        self.controller = DatasetController()

    def synth_command(self, manifest_path: Optional[str] = None, seed: Optional[int] = None,
                      output_dir: Optional[str] = None):
        self.run(self._synth, manifest_path, seed, output_dir)

    def _synth(self, manifest_path, seed, output_dir):
        manifest = self.controller.load_manifest(manifest_path, seed, output_dir)
        self.display_header(SYNTH_MESSAGES["header"])

        splits = {}
        for split in self.show_progress(list(SPLITS), SYNTH_MESSAGES["progress"]):
            splits[split] = self.controller.build(manifest, split)
        path = self.controller.write(manifest, splits)
        counts = {split: len(samples) for split, samples in splits.items()}

        if self.json_output:
            self.display_json({"dataset": str(path), "seed": manifest.seed, "counts": counts})
            return

        rows = [[split, count] for split, count in counts.items()]
        self.display_table(
            SYNTH_MESSAGES["table_title"],
            [{"name": "Split", "style": "cyan"},
             {"name": "Échantillons", "style": "green", "justify": "right"}],
            rows,
        )
        self.display_success(SYNTH_MESSAGES["success"].format(
            count=sum(counts.values()), path=manifest.dataset_dir))
