"""Frames, masks, ROI statistics, rendering and per-pixel correction."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radtherm.constants import celsius_to_kelvin
from radtherm.errors import DomainError
from radtherm.frames import (BISECTION, CORRECTED_TEMPERATURE, MaskParameters,
                             MaskRegion, ParameterMask, RoiGeometry, RoiKind,
                             SceneSpec, ThermalFrame, TubeSpec,
                             bresenham_line, correct_frame,
                             ground_truth_temperatures,
                             render_synthetic_frame, roi_stats)

# 40-digit oracle for the bell-parametrized nominal scene below
# (see tests/oracles.md).
GOLDEN_BELL_D_SIGNAL = 3596.4154858625401105

NOMINAL_PARAMS = MaskParameters(
    wall_temp=1378.15, gas_temp=1253.15,
    emis_height=0.82, emis_mean=3.95, emis_sigma=1.0,
    abs_height=0.05, abs_mean=3.95, abs_sigma=1.0,
)


def make_frame(values: np.ndarray, kind: str = "raw_signal") -> ThermalFrame:
    h, w = values.shape
    return ThermalFrame(frame_id="f1", camera_id="cam1", timestamp_ms=0,
                        width=w, height=h,
                        values=values.astype(np.float32), kind=kind)


def simple_scene(noise: float = 0.0, seed: int = 0) -> SceneSpec:
    return SceneSpec(
        camera_id="cam1",
        parameters=NOMINAL_PARAMS,
        tubes=(TubeSpec(center_x=10.0, center_y=8.0, radius=4.0,
                        tube_temp=1223.15),
               TubeSpec(center_x=22.0, center_y=8.0, radius=3.0,
                        tube_temp=1300.15)),
        noise_amplitude=noise,
        seed=seed,
    )


class TestValidation:
    def test_frame_shape_checked(self):
        with pytest.raises(DomainError):
            ThermalFrame(frame_id="x", camera_id="c", timestamp_ms=0,
                         width=4, height=4,
                         values=np.zeros((3, 4), dtype=np.float32))

    def test_raw_frame_must_be_finite(self):
        values = np.zeros((2, 2), dtype=np.float32)
        values[0, 0] = np.nan
        with pytest.raises(DomainError):
            make_frame(values)

    def test_mask_parameters_ranges(self):
        with pytest.raises(DomainError):
            MaskParameters(wall_temp=1378.15, gas_temp=1253.15,
                           emis_height=1.2, emis_mean=3.95, emis_sigma=1.0,
                           abs_height=0.05, abs_mean=3.95, abs_sigma=1.0)
        with pytest.raises(DomainError):
            MaskParameters(wall_temp=300.0, gas_temp=1253.15,
                           emis_height=0.8, emis_mean=3.95, emis_sigma=1.0,
                           abs_height=0.05, abs_mean=3.95, abs_sigma=1.0)

    def test_geometry_vertex_counts(self):
        with pytest.raises(DomainError):
            RoiGeometry(RoiKind.POINT, ((1.0, 1.0), (2.0, 2.0)))
        with pytest.raises(DomainError):
            RoiGeometry(RoiKind.LINE, ((1.0, 1.0),))
        with pytest.raises(DomainError):
            RoiGeometry(RoiKind.POLYGON, ((0.0, 0.0), (1.0, 1.0)))
        with pytest.raises(DomainError):
            RoiGeometry(RoiKind.POLYGON, ((0.0, 0.0), (1.0, 1.0), (2.0, 2.0)))

    def test_out_of_bounds_geometry(self):
        frame = make_frame(np.ones((8, 8)))
        with pytest.raises(DomainError):
            roi_stats(frame, RoiGeometry(RoiKind.POINT, ((9.0, 1.0),)))


class TestMaskResolution:
    def test_default_only(self):
        mask = ParameterMask(camera_id="c", default_parameters=NOMINAL_PARAMS)
        groups, params = mask.resolve(6, 4)
        assert np.all(groups == 0)
        assert params == [NOMINAL_PARAMS]

    def test_last_region_wins(self):
        other = MaskParameters(wall_temp=1378.15, gas_temp=1253.15,
                               emis_height=0.7, emis_mean=3.95, emis_sigma=1.0,
                               abs_height=0.05, abs_mean=3.95, abs_sigma=1.0)
        third = MaskParameters(wall_temp=1378.15, gas_temp=1253.15,
                               emis_height=0.9, emis_mean=3.95, emis_sigma=1.0,
                               abs_height=0.05, abs_mean=3.95, abs_sigma=1.0)
        square = ((1.0, 1.0), (4.0, 1.0), (4.0, 4.0), (1.0, 4.0))
        mask = ParameterMask(
            camera_id="c", default_parameters=NOMINAL_PARAMS,
            regions=(MaskRegion(square, other),
                     MaskRegion(((2.0, 2.0), (5.0, 2.0), (5.0, 5.0), (2.0, 5.0)),
                                third)),
        )
        groups, params = mask.resolve(8, 8)
        assert params[groups[3, 3]] == third  # overlap goes to the later region
        assert params[groups[2, 1]].emis_height == 0.7
        assert params[groups[0, 0]] == NOMINAL_PARAMS

    @given(st.lists(st.tuples(st.floats(0.0, 15.0), st.floats(0.0, 11.0)),
                    min_size=3, max_size=6))
    def test_every_pixel_resolves(self, vertices):
        regions = ()
        try:
            region = MaskRegion(tuple(vertices), NOMINAL_PARAMS)
            regions = (region,)
        except DomainError:
            pass
        mask = ParameterMask(camera_id="c", default_parameters=NOMINAL_PARAMS,
                             regions=regions)
        groups, params = mask.resolve(16, 12)
        assert groups.shape == (12, 16)
        assert np.all(groups >= 0)
        assert np.all(groups < len(params))


class TestRoiStats:
    def test_point_on_constant_frame(self):
        frame = make_frame(np.full((8, 8), 5.0))
        stats = roi_stats(frame, RoiGeometry(RoiKind.POINT, ((4.0, 4.0),)))
        assert stats.mean == 5.0
        assert stats.std == 0.0
        assert stats.pixel_count == 9

    def test_point_neighborhood_clips_at_corner(self):
        frame = make_frame(np.arange(16, dtype=float).reshape(4, 4))
        stats = roi_stats(frame, RoiGeometry(RoiKind.POINT, ((0.0, 0.0),)))
        assert stats.pixel_count == 4
        assert stats.mean == pytest.approx(np.mean([0.0, 1.0, 4.0, 5.0]))

    def test_horizontal_line_order(self):
        values = np.tile(np.arange(10, dtype=float), (4, 1))
        frame = make_frame(values)
        stats = roi_stats(frame, RoiGeometry(RoiKind.LINE,
                                             ((0.0, 2.0), (9.0, 2.0))))
        assert stats.pixel_count == 10
        assert list(stats.values) == list(range(10))

    def test_line_order_follows_vertex_order(self):
        values = np.tile(np.arange(10, dtype=float), (4, 1))
        frame = make_frame(values)
        stats = roi_stats(frame, RoiGeometry(RoiKind.LINE,
                                             ((9.0, 1.0), (0.0, 1.0))))
        assert list(stats.values) == list(range(9, -1, -1))

    def test_bresenham_diagonal(self):
        assert bresenham_line(0, 0, 3, 3) == [(0, 0), (1, 1), (2, 2), (3, 3)]

    def test_polygon_on_constant_frame(self):
        frame = make_frame(np.full((12, 12), 7.5))
        square = RoiGeometry(RoiKind.POLYGON,
                             ((2.0, 2.0), (9.0, 2.0), (9.0, 9.0), (2.0, 9.0)))
        stats = roi_stats(frame, square)
        assert stats.std == 0.0
        assert stats.mean == 7.5
        assert sum(stats.histogram_counts) == stats.pixel_count
        assert stats.percentiles["50"] == 7.5

    def test_polygon_against_brute_force_oracle(self):
        rng = np.random.default_rng(31)
        frame = make_frame(rng.normal(size=(20, 24)))
        for _ in range(10):
            vertices = tuple(
                (rng.uniform(0.0, 23.0), rng.uniform(0.0, 19.0))
                for _ in range(int(rng.integers(3, 7))))
            try:
                geom = RoiGeometry(RoiKind.POLYGON, vertices)
            except DomainError:
                continue
            stats = roi_stats(frame, geom)
            # straight-line oracle: crossing test on every pixel center
            selected = []
            for y in range(20):
                for x in range(24):
                    crossings = 0
                    n = len(vertices)
                    for i in range(n):
                        x0, y0 = vertices[i]
                        x1, y1 = vertices[(i + 1) % n]
                        if (y0 > y) != (y1 > y):
                            if x < x0 + (y - y0) * (x1 - x0) / (y1 - y0):
                                crossings += 1
                    if crossings % 2 == 1:
                        selected.append(float(frame.values[y, x]))
            assert stats.pixel_count == len(selected)
            assert stats.mean == pytest.approx(np.mean(selected), rel=1e-12)
            assert stats.std == pytest.approx(np.std(selected), rel=1e-9,
                                              abs=1e-12)

    def test_empty_polygon_rejected(self):
        frame = make_frame(np.ones((8, 8)))
        sliver = RoiGeometry(RoiKind.POLYGON,
                             ((0.2, 0.2), (0.4, 0.2), (0.3, 0.4)))
        with pytest.raises(DomainError):
            roi_stats(frame, sliver)


class TestRendering:
    def test_uniform_scene_uniform_pixels(self):
        spec = SceneSpec(camera_id="cam1", parameters=NOMINAL_PARAMS)
        frame = render_synthetic_frame(spec, 16, 10)
        assert np.all(frame.values == frame.values[0, 0])

    def test_same_seed_identical(self):
        a = render_synthetic_frame(simple_scene(noise=2.0, seed=5), 32, 20,
                                   frame_id="a")
        b = render_synthetic_frame(simple_scene(noise=2.0, seed=5), 32, 20,
                                   frame_id="b")
        assert a.values.tobytes() == b.values.tobytes()

    def test_different_seed_differs(self):
        a = render_synthetic_frame(simple_scene(noise=2.0, seed=5), 32, 20)
        b = render_synthetic_frame(simple_scene(noise=2.0, seed=6), 32, 20)
        assert a.values.tobytes() != b.values.tobytes()

    def test_tube_pixel_matches_golden_signal(self):
        frame = render_synthetic_frame(simple_scene(), 32, 20)
        # (10, 8) is inside the first tube at the nominal temperature
        assert float(frame.values[8, 10]) == pytest.approx(
            GOLDEN_BELL_D_SIGNAL, rel=1e-6)  # float32 storage

    def test_ground_truth_layout(self):
        spec = simple_scene()
        truth = ground_truth_temperatures(spec, 32, 20)
        assert truth[8, 10] == 1223.15
        assert truth[8, 22] == 1300.15
        assert truth[0, 0] == NOMINAL_PARAMS.wall_temp


class TestCorrection:
    def test_bisection_recovers_ground_truth(self):
        spec = simple_scene()
        frame = render_synthetic_frame(spec, 32, 20)
        corrected = correct_frame(frame, spec.generating_mask(), BISECTION)
        truth = ground_truth_temperatures(spec, 32, 20)
        assert corrected.kind == CORRECTED_TEMPERATURE
        assert corrected.error_count == 0
        assert corrected.mask_version == 1
        assert float(np.max(np.abs(corrected.values - truth))) <= 0.01

    def test_idempotent(self):
        spec = simple_scene()
        frame = render_synthetic_frame(spec, 24, 16)
        mask = spec.generating_mask()
        a = correct_frame(frame, mask, BISECTION, frame_id="a")
        b = correct_frame(frame, mask, BISECTION, frame_id="b")
        assert a.values.tobytes() == b.values.tobytes()

    def test_wrong_emissivity_biases_low(self):
        # reflection-poor scene (cool walls): overstated emissivity in
        # the mask pulls every corrected temperature down
        cool_wall = MaskParameters(
            wall_temp=celsius_to_kelvin(800.0), gas_temp=1253.15,
            emis_height=0.82, emis_mean=3.95, emis_sigma=1.0,
            abs_height=0.05, abs_mean=3.95, abs_sigma=1.0)
        spec = SceneSpec(camera_id="cam1", parameters=cool_wall,
                         tubes=(TubeSpec(8.0, 8.0, 5.0, 1223.15),))
        frame = render_synthetic_frame(spec, 20, 16)
        wrong = MaskParameters(
            wall_temp=celsius_to_kelvin(800.0), gas_temp=1253.15,
            emis_height=0.92, emis_mean=3.95, emis_sigma=1.0,
            abs_height=0.05, abs_mean=3.95, abs_sigma=1.0)
        mask = ParameterMask(camera_id="cam1", default_parameters=wrong)
        corrected = correct_frame(frame, mask, BISECTION)
        truth = ground_truth_temperatures(spec, 20, 16)
        assert np.all(corrected.values < truth)

    def test_failed_pixels_are_sentinels(self):
        spec = simple_scene()
        frame = render_synthetic_frame(spec, 8, 6)
        broken = frame.values.copy()
        broken[0, 0] = 1e9  # unbracketable signal
        frame = make_frame(broken)
        corrected = correct_frame(frame, spec.generating_mask(), BISECTION)
        assert corrected.error_count == 1
        assert np.isnan(corrected.values[0, 0])
        assert np.isfinite(corrected.values[1:]).all()

    def test_only_raw_frames_correctable(self):
        spec = simple_scene()
        frame = render_synthetic_frame(spec, 8, 6)
        corrected = correct_frame(frame, spec.generating_mask(), BISECTION)
        with pytest.raises(DomainError):
            correct_frame(corrected, spec.generating_mask(), BISECTION)

    def test_unknown_method(self):
        spec = simple_scene()
        frame = render_synthetic_frame(spec, 8, 6)
        with pytest.raises(DomainError):
            correct_frame(frame, spec.generating_mask(), "newton")

    def test_per_region_parameters_used(self):
        # two regions with different emissivities: corrected values
        # differ across the region boundary on a uniform raw frame.
        # the frame must view a surface away from the wall temperature,
        # otherwise the emissivity cancels exactly.
        region_params = MaskParameters(
            wall_temp=1378.15, gas_temp=1253.15,
            emis_height=0.7, emis_mean=3.95, emis_sigma=1.0,
            abs_height=0.05, abs_mean=3.95, abs_sigma=1.0)
        spec = SceneSpec(camera_id="cam1", parameters=NOMINAL_PARAMS,
                         tubes=(TubeSpec(8.0, 5.0, 30.0, 1223.15),))
        frame = render_synthetic_frame(spec, 16, 10)
        mask = ParameterMask(
            camera_id="cam1", default_parameters=NOMINAL_PARAMS,
            regions=(MaskRegion(((0.0, 0.0), (7.0, 0.0), (7.0, 9.0), (0.0, 9.0)),
                                region_params),),
        )
        corrected = correct_frame(frame, mask, BISECTION)
        assert corrected.values[5, 3] != corrected.values[5, 12]


class TestSceneSpecJson:
    def test_round_trip(self):
        spec = simple_scene(noise=1.5, seed=9)
        again = SceneSpec.from_json(spec.to_json())
        assert again == spec

    def test_tube_temperature_ranges_enforced(self):
        with pytest.raises(DomainError):
            SceneSpec(camera_id="c", parameters=NOMINAL_PARAMS,
                      tubes=(TubeSpec(1.0, 1.0, 2.0, 500.0),))
