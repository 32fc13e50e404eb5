"""Ellipse primitives, local barriers and the time-varying composite."""
import math

import numpy as np
import pytest

from barrier_synthesis import (BarrierBuffer, BarrierGeometry, EllipsoidBarrier, LocalBarrier, _ray_frame,
                               advance_epoch, apex_seal, build_local_barrier, composite_h,
                               detection_primitive, eval_local_barrier, local_barrier_value, snapshot)
from cbf_errors import InvalidArgumentError, StaleBufferError
from homotopy import HomotopyParams
from perception_sim import Circle, ScanParams, World, fov_boundary, scan
from soft_compose import SoftParams, softmax

GEOM = BarrierGeometry(d_w=0.3, d_s=0.3, r_bar=5.0)
T_S = 0.2


def _world(rng, count=5):
    circles = []
    while len(circles) < count:
        angle = rng.uniform(0, 2 * math.pi)
        distance = rng.uniform(1.8, 3.5)
        circles.append(Circle((distance * math.cos(angle), distance * math.sin(angle)), rng.uniform(0.4, 1.0)))
    return World(2, circles)


def _barriers(rng, world, count, kappa1=20.0, P=120, spread=0.3):
    barriers = []
    for k in range(count):
        origin = rng.uniform(-spread, spread, 2)
        while world.penetrates(origin):
            origin = rng.uniform(-spread, spread, 2)
        barriers.append(build_local_barrier(scan(world, origin, ScanParams(P, GEOM.r_bar), epoch=k),
                                            None, GEOM, kappa1))
    return barriers


def _buffer_at(barriers, N, kappa=20.0):
    """Buffer whose newest entry is barriers[-1]"""
    buffer = BarrierBuffer.warm_start(barriers[0], N, T_S, kappa)
    for barrier in barriers[1:]:
        buffer = advance_epoch(buffer, barrier)
    return buffer


def _fd_jet(fn, y, step=1e-6):
    """Central-difference gradient of fn and of its gradient at y"""
    eye = np.eye(y.size)
    grad = np.array([(fn(y + step * e).value - fn(y - step * e).value) / (2 * step) for e in eye])
    hess = np.array([(fn(y + step * e).grad - fn(y - step * e).grad) / (2 * step) for e in eye])
    return grad, hess


class TestPrimitive:

    def test_detection_ellipse(self):
        ellipse = detection_primitive(np.zeros(2), np.array([1.0, 0.0]), 3.0, GEOM)
        np.testing.assert_allclose(ellipse.center, [4.0, 0.0])
        assert ellipse.semi_major == pytest.approx(1.3)
        assert ellipse.evaluate(np.array([3.0, 0.0]))[0] == pytest.approx(1 / 1.3 ** 2 - 1)
        assert ellipse.evaluate(np.zeros(2))[0] == pytest.approx((4 / 1.3) ** 2 - 1)
        assert ellipse.evaluate(np.zeros(2))[0] > 0

    def test_no_detection_gives_margin_sized_ellipse(self):
        direction = np.array([math.cos(0.7), math.sin(0.7)])
        ellipse = detection_primitive(np.array([1.0, 2.0]), direction, 5.0, GEOM)
        assert ellipse.semi_major == pytest.approx(GEOM.d_s)
        np.testing.assert_allclose(ellipse.center, np.array([1.0, 2.0]) + 5.0 * direction)

    def test_gradient_and_hessian(self):
        ellipse = detection_primitive(np.zeros(2), np.array([0.6, 0.8]), 2.0, GEOM)
        q = np.array([0.4, -0.3])
        value, grad, hess = ellipse.evaluate(q)
        step = 1e-6
        fd = [(ellipse.evaluate(q + step * e)[0] - ellipse.evaluate(q - step * e)[0]) / (2 * step)
              for e in np.eye(2)]
        np.testing.assert_allclose(grad, fd, rtol=1e-7)
        np.testing.assert_allclose(hess, 2 * ellipse.shape)

    def test_rotation_must_be_orthonormal(self):
        with pytest.raises(InvalidArgumentError):
            EllipsoidBarrier(np.zeros(2), np.array([[1.0, 0.1], [0.0, 1.0]]), np.ones(2))
        with pytest.raises(InvalidArgumentError):
            EllipsoidBarrier(np.zeros(2), np.eye(2), np.array([1.0, 0.0]))

    def test_3d_frame(self):
        rng = np.random.default_rng(5)
        directions = list(rng.normal(size=(50, 3))) + [np.array([0, 0, 1.0]), np.array([0, 0, -1.0])]
        for d in directions:
            d = d / np.linalg.norm(d)
            frame = _ray_frame(d)
            np.testing.assert_allclose(frame @ frame.T, np.eye(3), atol=1e-12)
            np.testing.assert_allclose(frame[:, 0], d, atol=1e-12)

    def test_3d_ellipsoid_is_round_across_the_ray(self):
        geom = BarrierGeometry(d_w=1.4, d_s=0.1, r_bar=10.0)
        d = np.array([1.0, 1.0, 1.0]) / math.sqrt(3)
        ellipsoid = detection_primitive(np.zeros(3), d, 4.0, geom)
        side_a = np.cross(d, [0.0, 0.0, 1.0])
        side_b = np.cross(d, side_a)
        for side in (side_a, side_b):
            point = ellipsoid.center + 1.4 * side / np.linalg.norm(side)
            assert ellipsoid.evaluate(point)[0] == pytest.approx(0.0, abs=1e-12)


class TestLocalBarrier:

    def test_single_primitive(self):
        ellipse = detection_primitive(np.zeros(2), np.array([1.0, 0.0]), 3.0, GEOM)
        barrier = LocalBarrier(0, [ellipse], 20.0)
        x = np.array([0.5, 0.2, 1.0, 0.3])
        jet = eval_local_barrier(barrier, x)
        value, grad, hess = ellipse.evaluate(x[:2])
        assert jet.value == pytest.approx(value)
        np.testing.assert_allclose(jet.grad[:2], grad)
        np.testing.assert_allclose(jet.hess[:2, :2], hess)
        assert np.all(jet.grad[2:] == 0.0)

    def test_equal_primitives_far_away(self):
        sc = scan(World(2), np.zeros(2), ScanParams(64, 5.0))
        barrier = build_local_barrier(sc, None, GEOM, 20.0)
        # the center is equidistant from every ray-end ellipse
        value = local_barrier_value(barrier, np.zeros(2))
        single = (5.0 / 0.3) ** 2 - 1
        assert value == pytest.approx(single - math.log(64) / 20.0, rel=1e-12)

    def test_jet_matches_finite_differences(self):
        rng = np.random.default_rng(6)
        world = _world(rng)
        barrier = _barriers(rng, world, 1, kappa1=5.0)[0]
        for _ in range(20):
            x = np.concatenate([rng.uniform(-1, 1, 2), rng.normal(size=2)])
            jet = eval_local_barrier(barrier, x)
            fd_grad, fd_hess = _fd_jet(lambda y: eval_local_barrier(barrier, y), x)
            scale = max(1.0, np.abs(jet.grad).max())
            np.testing.assert_allclose(jet.grad[:-1], fd_grad, rtol=1e-5, atol=1e-5 * scale)
            hscale = max(1.0, np.abs(jet.hess).max())
            np.testing.assert_allclose(jet.hess[:-1, :-1], fd_hess[:, :-1], rtol=1e-5, atol=1e-5 * hscale)

    def test_empty_scan_rejected(self):
        sc = scan(World(2), np.zeros(2), ScanParams(4, 5.0))
        empty = type(sc)(origin=sc.origin, directions=sc.directions[:0], ranges=sc.ranges[:0], r_bar=5.0,
                         fov=sc.fov, epoch=0, azimuths=sc.azimuths[:0])
        with pytest.raises(InvalidArgumentError):
            build_local_barrier(empty, None, GEOM, 20.0)

    def test_fov_boundary_keeps_the_apex_safe(self):
        fov = math.radians(100)
        sc = scan(World(2), np.zeros(2), ScanParams(100, 5.0, fov), heading=0.0)
        samples = fov_boundary(np.zeros(2), 0.0, fov, 5.0, 400)
        barrier = build_local_barrier(sc, samples, GEOM, 30.0)
        assert len(barrier) > 100
        assert local_barrier_value(barrier, np.zeros(2)) > 0
        # a point out on the sector edge is outside the safe set
        edge = 3.0 * np.array([math.cos(fov / 2), math.sin(fov / 2)])
        assert local_barrier_value(barrier, edge) < 0

    def test_walking_into_the_unsensed_region_is_blocked(self):
        fov = math.radians(100)
        # an obstacle straight behind, invisible to the sector
        world = World(2, [Circle((-3.0, 0.0), 0.5)])
        sc = scan(world, np.zeros(2), ScanParams(100, 5.0, fov), heading=0.0)
        assert np.all(sc.ranges == 5.0)
        barrier = build_local_barrier(sc, fov_boundary(np.zeros(2), 0.0, fov, 5.0, 400), GEOM, 30.0)
        assert local_barrier_value(barrier, np.zeros(2)) > 0
        distances = np.linspace(0.0, 3.0, 301)
        for bearing in np.linspace(fov / 2, 2 * math.pi - fov / 2, 37):
            direction = np.array([math.cos(bearing), math.sin(bearing)])
            values = [local_barrier_value(barrier, rho * direction) for rho in distances]
            assert min(values) < 0, bearing

    def test_apex_seal_ring(self):
        fov = math.radians(120)
        origin = np.array([1.0, -2.0])
        seal = apex_seal(origin, 0.4, fov, 0.8)
        centers = np.array([disc.center for disc in seal])
        np.testing.assert_allclose(np.linalg.norm(centers - origin, axis=1), 0.8)
        # neighbouring discs overlap, so the ring has no gap
        assert np.linalg.norm(np.diff(centers, axis=0), axis=1).max() <= 0.4
        for disc in seal:
            assert disc.semi_major == pytest.approx(0.4)
            assert disc.evaluate(origin)[0] == pytest.approx(3.0)
        first = math.atan2(*(centers[0] - origin)[::-1])
        assert first == pytest.approx(0.4 + fov / 2)

    def test_apex_seal_rejects_bad_input(self):
        with pytest.raises(InvalidArgumentError):
            apex_seal(np.zeros(3), 0.0, 1.0, 0.8)
        with pytest.raises(InvalidArgumentError):
            apex_seal(np.zeros(2), 0.0, 2 * math.pi, 0.8)
        with pytest.raises(InvalidArgumentError):
            BarrierGeometry(d_w=0.3, d_s=0.3, r_bar=5.0, apex_clearance=0.0)

    def test_snapshot(self):
        barrier = _barriers(np.random.default_rng(7), World(2), 1, P=8)[0]
        data = snapshot(barrier)
        assert data["epoch"] == 0
        assert len(data["centers"]) == 8
        assert np.array(data["rotations"]).shape == (8, 2, 2)


class TestBuffer:

    def test_warm_start_and_advance(self):
        barriers = _barriers(np.random.default_rng(8), World(2), 4, P=8)
        buffer = BarrierBuffer.warm_start(barriers[0], 2, T_S, 20.0)
        assert len(buffer.history) == 3
        assert buffer.k == 0
        buffer = advance_epoch(buffer, barriers[1])
        assert buffer.history[0] is barriers[1]
        assert buffer.history[1] is barriers[0]
        assert buffer.epoch_interval() == pytest.approx((0.2, 0.4))
        with pytest.raises(InvalidArgumentError):
            advance_epoch(buffer, barriers[3])

    def test_bad_buffers(self):
        barrier = _barriers(np.random.default_rng(9), World(2), 1, P=8)[0]
        with pytest.raises(InvalidArgumentError):
            BarrierBuffer.warm_start(barrier, 0, T_S, 20.0)
        with pytest.raises(InvalidArgumentError):
            BarrierBuffer((barrier,) * 2, 2, T_S, 20.0, 0)


class TestComposite:

    def test_stale_time_rejected(self):
        barriers = _barriers(np.random.default_rng(10), World(2), 2, P=8)
        buffer = _buffer_at(barriers, 2)
        x = np.zeros(4)
        with pytest.raises(StaleBufferError):
            composite_h(buffer, x, 0.1)
        with pytest.raises(StaleBufferError):
            composite_h(buffer, x, 0.4 + 1e-6)
        composite_h(buffer, x, 0.2)
        composite_h(buffer, x, 0.4 - 1e-9)
        # the switch time itself still belongs to the epoch
        assert composite_h(buffer, x, 0.4).value == pytest.approx(composite_h(buffer, x, 0.4 - 1e-9).value, abs=1e-6)

    def test_identical_barriers_collapse(self):
        barrier = _barriers(np.random.default_rng(11), _world(np.random.default_rng(11)), 1)[0]
        buffer = BarrierBuffer.warm_start(barrier, 3, T_S, 20.0)
        x = np.array([0.2, -0.1, 0.5, 0.0])
        beta = eval_local_barrier(barrier, x)
        for t in (0.0, 0.05, 0.13, 0.19):
            jet = composite_h(buffer, x, t)
            assert jet.value == pytest.approx(beta.value, abs=1e-12)
            assert jet.dt == pytest.approx(0.0, abs=1e-12)

    def test_epoch_start_drops_the_newest(self):
        rng = np.random.default_rng(12)
        barriers = _barriers(rng, _world(rng), 5)
        buffer = _buffer_at(barriers, 3)
        x = np.array([0.1, 0.1, 0.0, 0.0])
        t = buffer.k * T_S
        values = [local_barrier_value(b, x[:2]) for b in buffer.history[1:]]
        assert composite_h(buffer, x, t).value == pytest.approx(softmax(SoftParams(20.0, 3), values), abs=1e-12)

    def test_continuity_across_epoch_switch(self):
        rng = np.random.default_rng(13)
        world = _world(rng)
        for N in (1, 2, 4):
            barriers = _barriers(rng, world, N + 3)
            before = _buffer_at(barriers[:-1], N)
            after = advance_epoch(before, barriers[-1])
            t_switch = after.k * T_S
            for _ in range(5):
                x = np.concatenate([rng.uniform(-0.5, 0.5, 2), rng.normal(size=2)])
                left = composite_h(before, x, t_switch - 1e-10)
                right = composite_h(after, x, t_switch)
                assert left.value == pytest.approx(right.value, abs=1e-6)
                np.testing.assert_allclose(left.grad, right.grad, atol=1e-5)
                np.testing.assert_allclose(left.hess, right.hess, atol=1e-4)

    def test_time_derivatives_have_no_jump(self):
        rng = np.random.default_rng(14)
        world = _world(rng)
        step = 1e-5
        for _ in range(50):
            barriers = _barriers(rng, world, 5)
            before = _buffer_at(barriers[:-1], 2)
            after = advance_epoch(before, barriers[-1])
            t_switch = after.k * T_S
            x = np.concatenate([rng.uniform(-0.5, 0.5, 2), rng.normal(size=2)])
            below = composite_h(before, x, t_switch - step)
            above = composite_h(after, x, t_switch + step)
            assert abs(below.value - above.value) < 1e-4
            assert abs(below.dt - above.dt) < 1e-4 * max(1.0, abs(below.dt))
            np.testing.assert_allclose(below.grad_x, above.grad_x, atol=1e-4 * max(1.0, np.abs(below.grad_x).max()))
            np.testing.assert_allclose(below.dxdt, above.dxdt, atol=1e-4 * max(1.0, np.abs(below.dxdt).max()))
            # eta'' only vanishes linearly at the knots, so the second time derivative needs a finer step
            scale = max(1.0, max(abs(local_barrier_value(b, x[:2])) for b in barriers))
            below = composite_h(before, x, t_switch - 1e-9)
            above = composite_h(after, x, t_switch + 1e-9)
            assert abs(below.dtt - above.dtt) < 1e-4 * scale

    def test_jet_matches_finite_differences(self):
        rng = np.random.default_rng(15)
        world = _world(rng)
        barriers = _barriers(rng, world, 6, kappa1=5.0)
        buffer = _buffer_at(barriers, 3, kappa=5.0)
        t0 = buffer.k * T_S
        for _ in range(1000):
            x = np.concatenate([rng.uniform(-0.5, 0.5, 2), rng.normal(size=2)])
            t = t0 + T_S * rng.uniform(0.1, 0.9)
            y = np.append(x, t)

            def h(z):
                return composite_h(buffer, z[:-1], z[-1])

            jet = h(y)
            fd_grad, fd_hess = _fd_jet(h, y)
            scale = max(1.0, np.abs(jet.grad).max())
            np.testing.assert_allclose(jet.grad, fd_grad, rtol=1e-5, atol=1e-5 * scale)
            hscale = max(1.0, np.abs(jet.hess).max())
            np.testing.assert_allclose(jet.hess, fd_hess, rtol=1e-5, atol=1e-5 * hscale)

    def test_middle_entries_commute(self):
        rng = np.random.default_rng(16)
        barriers = _barriers(rng, _world(rng), 4)
        newest, m1, m2, oldest = barriers[3], barriers[2], barriers[1], barriers[0]
        a = BarrierBuffer((newest, m1, m2, oldest), 3, T_S, 20.0, 3)
        b = BarrierBuffer((newest, m2, m1, oldest), 3, T_S, 20.0, 3)
        x = np.array([0.1, -0.2, 0.4, 0.3])
        ja, jb = composite_h(a, x, 0.67), composite_h(b, x, 0.67)
        assert ja.value == pytest.approx(jb.value, abs=1e-12)
        np.testing.assert_allclose(ja.hess, jb.hess, atol=1e-9)

    def test_lam_finishes_blend_early(self):
        rng = np.random.default_rng(17)
        barriers = _barriers(rng, _world(rng), 3)
        fast = BarrierBuffer((barriers[2], barriers[1], barriers[0]), 2, T_S, 20.0, 2, HomotopyParams(2, 2.0))
        x = np.array([0.0, 0.1, 0.0, 0.0])
        jet = composite_h(fast, x, 2 * T_S + 0.6 * T_S)
        expected = softmax(SoftParams(20.0, 2), [local_barrier_value(barriers[1], x[:2]),
                                                 local_barrier_value(barriers[2], x[:2])])
        assert jet.value == pytest.approx(expected, abs=1e-12)
        assert jet.dt == 0.0


class TestSafeSetIsObstacleFree:

    def test_points_inside_obstacles_are_unsafe(self):
        rng = np.random.default_rng(18)
        for _ in range(5):
            world = _world(rng, count=4)
            barriers = _barriers(rng, world, 4, P=360, spread=0.2)
            buffer = _buffer_at(barriers, 2)
            t0 = buffer.k * T_S
            for obstacle in world.obstacles:
                for _ in range(20):
                    angle = rng.uniform(0, 2 * math.pi)
                    radius = obstacle.radius * math.sqrt(rng.uniform(0, 0.9))
                    point = np.array(obstacle.center) + radius * np.array([math.cos(angle), math.sin(angle)])
                    if np.linalg.norm(point) > 4.0:
                        continue
                    t = t0 + T_S * rng.uniform(0, 0.999)
                    assert composite_h(buffer, np.append(point, [0.0, 0.0]), t).value < 0

    def test_limited_fov_sector_is_obstacle_free(self):
        rng = np.random.default_rng(19)
        fov = math.radians(120)
        inside = 0
        for _ in range(5):
            world = _world(rng, count=6)
            heading = rng.uniform(-math.pi, math.pi)
            sc = scan(world, np.zeros(2), ScanParams(360, GEOM.r_bar, fov), heading=heading)
            samples = fov_boundary(np.zeros(2), heading, fov, GEOM.r_bar, 200)
            barrier = build_local_barrier(sc, samples, GEOM, 20.0)
            bearings = heading + rng.uniform(-fov / 2, fov / 2, 2000)
            ranges = 4.5 * np.sqrt(rng.uniform(0, 1, 2000))
            points = ranges[:, None] * np.column_stack([np.cos(bearings), np.sin(bearings)])
            for point in points:
                if world.penetrates(point):
                    inside += 1
                    assert local_barrier_value(barrier, point) < 0
        assert inside > 100
