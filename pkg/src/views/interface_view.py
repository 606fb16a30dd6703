"""
Vue de localisation de l'interface - Commande interface

Fichier: src/views/interface_view.py
"""

from typing import Optional

from src.config.messages import INTERFACE_MESSAGES
from src.controllers.interface_controller import InterfaceController
from .base_view import BaseView


class InterfaceView(BaseView):
    """Vue de la commande interface."""

    def __init__(self, json_output: bool = False):
        super().__init__(json_output)
        self.controller = InterfaceController()

    def interface_command(self, input_file: str, mode: Optional[str] = None,
                          n_t: Optional[int] = None, delta: Optional[float] = None,
                          radius: Optional[float] = None, occlusion: Optional[str] = None,
                          output: Optional[str] = None, fmt: str = "ply"):
        self.run(self._interface, input_file, mode, n_t, delta, radius, occlusion, output, fmt)

    def _interface(self, input_file, mode, n_t, delta, radius, occlusion, output, fmt):
        config = self.controller.interface_config(mode=mode, n_t=n_t, delta=delta, radius=radius)
        point = self.controller.parse_point(occlusion)
        self.display_header(INTERFACE_MESSAGES["header"])
        result, path = self.controller.run(input_file, config, point, output, fmt)

        if self.json_output:
            self.display_json({
                "mode": result.mode_used.value,
                "count": result.count,
                "indices": [int(i) for i in result.indices],
                "output": str(path),
            })
            return

        if result.count == 0:
            self.display_warning(INTERFACE_MESSAGES["none_detected"])
        self.display_success(INTERFACE_MESSAGES["success"].format(
            count=result.count, mode=result.mode_used.value))
        self.display_info(INTERFACE_MESSAGES["written"].format(path=path))
