"""Post-training experiment battery."""

from .complexity import ComplexityReport, complexity_report
from .probes import (
    DEFAULT_PROBE_SIDE,
    probe_all_room_surfaces,
    run_empty_room_probe,
)
from .protocol import RoomTestReport, TestEpisodeRow, run_test_protocol, write_report
from .stats import sign_counts, sign_test
from .svgpaths import (
    TrajectoryPolyline,
    render_trajectories,
    trajectories_to_polylines,
    write_trajectories_svg,
)

__all__ = [
    "ComplexityReport",
    "DEFAULT_PROBE_SIDE",
    "RoomTestReport",
    "TestEpisodeRow",
    "TrajectoryPolyline",
    "complexity_report",
    "probe_all_room_surfaces",
    "render_trajectories",
    "run_empty_room_probe",
    "run_test_protocol",
    "sign_counts",
    "sign_test",
    "trajectories_to_polylines",
    "write_report",
    "write_trajectories_svg",
]
