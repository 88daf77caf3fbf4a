#include <doctest.h>

#include "helpers.hpp"
#include "phaseborn/kernels.hpp"
#include "phaseborn/rng.hpp"
#include "phaseborn/sphere.hpp"

using namespace phaseborn;

namespace {

std::vector<double> random_weights(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::vector<double> w(n);
    for (auto &x : w) {
        x = u(rng);
    }
    w[n / 2] = 0.0;
    return w;
}

} // namespace

TEST_CASE("substream seeds are distinct") {
    CHECK(substream_seed(1, 0) != substream_seed(1, 1));
    CHECK(substream_seed(1, 0) != substream_seed(2, 0));
    CHECK(substream_seed(0, 0) != 0);
    CHECK(block_count(0) == 0);
    CHECK(block_count(1) == 1);
    CHECK(block_count(kBlockSize) == 1);
    CHECK(block_count(kBlockSize + 1) == 2);
}

TEST_CASE("reference and parallel sampling are bit-identical") {
    CMatrix a(4, 5000), b(4, 5000);
    kernels::reference::fill_uniform_sphere(a, 8);
    kernels::set_worker_count(4);
    kernels::parallel::fill_uniform_sphere(b, 8);
    CHECK(a == b);
}

TEST_CASE("parallel reductions match the serial reference") {
    const std::size_t n = 10 * kBlockSize + 37;
    CMatrix pts(3, static_cast<Eigen::Index>(n));
    kernels::reference::fill_uniform_sphere(pts, 3);
    const auto w = random_weights(n, 4);
    const HermitianObservable a(testing::random_hermitian(3, 5));

    const auto ro = kernels::reference::outer_moments(pts, w);
    const auto rs = kernels::reference::outer_spread(pts, w, ro.mean);
    const auto rf = kernels::reference::form_values(a.matrix(), pts);
    const auto rm = kernels::reference::scalar_moments(rf.values, w);

    for (int threads : {1, 2, 5}) {
        kernels::set_worker_count(threads);
        const auto po = kernels::parallel::outer_moments(pts, w);
        const auto ps = kernels::parallel::outer_spread(pts, w, po.mean);
        const auto pf = kernels::parallel::form_values(a.matrix(), pts);
        const auto pm = kernels::parallel::scalar_moments(pf.values, w);

        CHECK(testing::max_abs(po.mean - ro.mean) <= 1e-13);
        CHECK(po.weight_sum == doctest::Approx(ro.weight_sum).epsilon(1e-13));
        CHECK((ps.real - rs.real).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((ps.imag - rs.imag).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(pf.values == rf.values);
        CHECK(pf.max_imag_residue == rf.max_imag_residue);
        CHECK(pm.mean == doctest::Approx(rm.mean).epsilon(1e-13));
        CHECK(pm.spread == doctest::Approx(rm.spread).epsilon(1e-12));
        CHECK(po.mean == po.mean.adjoint());
    }
}

TEST_CASE("parallel reductions are bit-identical across worker counts") {
    const std::size_t n = 7 * kBlockSize + 5;
    CMatrix pts(2, static_cast<Eigen::Index>(n));
    kernels::reference::fill_uniform_sphere(pts, 21);
    const auto w = random_weights(n, 22);
    kernels::set_worker_count(1);
    const auto o1 = kernels::parallel::outer_moments(pts, w);
    const auto s1 = kernels::parallel::outer_spread(pts, w, o1.mean);
    const auto m1 = kernels::parallel::scalar_moments(w, w);
    kernels::set_worker_count(6);
    const auto o6 = kernels::parallel::outer_moments(pts, w);
    const auto s6 = kernels::parallel::outer_spread(pts, w, o6.mean);
    const auto m6 = kernels::parallel::scalar_moments(w, w);
    CHECK(o1.mean == o6.mean);
    CHECK(o1.weight_sum == o6.weight_sum);
    CHECK(s1.real == s6.real);
    CHECK(s1.imag == s6.imag);
    CHECK(m1.mean == m6.mean);
    CHECK(m1.spread == m6.spread);
}

TEST_CASE("degenerate weights") {
    CMatrix pts = CMatrix::Identity(2, 2);
    const std::vector<double> zero{0.0, 0.0};
    CHECK_THROWS_AS(kernels::parallel::outer_moments(pts, zero), DegenerateBatchError);
    CHECK_THROWS_AS(kernels::reference::outer_moments(pts, zero), DegenerateBatchError);
    CHECK_THROWS_AS(kernels::parallel::scalar_moments(zero, zero), DegenerateBatchError);
}

TEST_CASE("standard_error") {
    // Unit weights: sample standard deviation over sqrt(N).
    const std::vector<double> f{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> w(4, 1.0);
    const auto m = kernels::reference::scalar_moments(f, w);
    const double sd = std::sqrt(5.0 / 3.0);
    CHECK(kernels::standard_error(m.spread, m.weight_sum, 4) == doctest::Approx(sd / 2.0));
    CHECK(kernels::standard_error(1.0, 1.0, 1) == 0.0);
}
