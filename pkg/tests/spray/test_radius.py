from leafsolve.data.fixtures import flat_plane
from leafsolve.spray import RadiusProbe, estimate_normal_radius, geodesic_spray


def test_flat_normal_radius():
    probes: list[RadiusProbe] = []

    radius = estimate_normal_radius(geodesic_spray(flat_plane()), [0.0, 0.0],
                                    step=1e-2,
                                    probes=probes)

    assert radius == 0.9375
    assert [probe.radius for probe in probes
            ] == [2.0, 1.0, 0.5, 0.75, 0.875, 0.9375]
    assert [probe.passed for probe in probes
            ] == [False, False, True, True, True, True]
    assert probes[1].reason == "chart exit"
