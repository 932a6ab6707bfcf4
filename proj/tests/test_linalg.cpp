#include <doctest.h>

#include "lrpcg/linalg.hpp"
#include "oracles.hpp"

using namespace lrpcg;

TEST_CASE("CMatrix rejects bad construction") {
    CHECK_THROWS_AS(CMatrix(2, 2, std::vector<cplx>(3)), ValidationError);
    CHECK_THROWS_AS(CMatrix(1, 1, {cplx(std::nan(""), 0.0)}), ValidationError);
    CMatrix m(3, 4);
    CHECK(m.size() == 12);
}

TEST_CASE("gemm small cases and counter") {
    const CMatrix a = oracle::random_matrix(3, 3, 1);
    CHECK(gemm(CMatrix::identity(3), a) == a);
    CHECK(gemm(CMatrix{{cplx(1, 1)}}, CMatrix{{cplx(1, -1)}})(0, 0) == cplx(2, 0));

    FlopCounter fc;
    gemm(oracle::random_matrix(5, 3, 2), oracle::random_matrix(3, 4, 3), Op::none, Op::none, &fc);
    CHECK(fc.multiplies() == 5 * 3 * 4);
    CHECK(fc.breakdown().at("gemm").mul == 60);
}

TEST_CASE("gemm matches triple loop for every transpose flag") {
    const CMatrix a = oracle::random_matrix(5, 3, 4), b = oracle::random_matrix(3, 4, 5);
    CHECK(oracle::diff(gemm(a, b), oracle::matmul(a, b)) <= 1e-13);
    CHECK(oracle::diff(gemm(a.adjoint(), b, Op::conj_trans), oracle::matmul(a, b)) <= 1e-13);
    CHECK(oracle::diff(gemm(a, b.adjoint(), Op::none, Op::conj_trans), oracle::matmul(a, b)) <= 1e-13);
    CHECK_THROWS_AS(gemm(a, a), DimensionError);
    try {
        gemm(a, a);
    } catch (const DimensionError& e) {
        CHECK(std::string(e.what()).find("5x3") != std::string::npos);
    }
}

TEST_CASE("gemm associativity") {
    const CMatrix a = oracle::random_matrix(6, 5, 6), b = oracle::random_matrix(5, 7, 7), c = oracle::random_matrix(7, 4, 8);
    const double scale = fro_norm(a) * fro_norm(b) * fro_norm(c);
    CHECK(fro_norm(gemm(gemm(a, b), c) - gemm(a, gemm(b, c))) <= 1e-11 * scale);
}

TEST_CASE("cholesky") {
    CHECK(cholesky(CMatrix::identity(4)) == CMatrix::identity(4));
    const CMatrix l = cholesky(CMatrix{{4.0, 0.0}, {0.0, 9.0}});
    CHECK(l(0, 0) == cplx(2.0));
    CHECK(l(1, 1) == cplx(3.0));

    const CMatrix g = oracle::random_matrix(8, 4, 9);
    const CMatrix w = gemm(g, g, Op::conj_trans);
    const CMatrix lw = cholesky(w);
    CHECK(fro_norm(gemm(lw, lw, Op::none, Op::conj_trans) - w) <= 1e-12 * fro_norm(w));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(lw(i, i).imag() == 0.0);
        CHECK(lw(i, i).real() > 0.0);
    }

    try {
        cholesky(CMatrix{{1.0, 0.0}, {0.0, -1.0}});
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.pivot == 1);
    }
    CHECK_THROWS_AS(cholesky(CMatrix{{1.0, 2.0}, {0.0, 1.0}}), ValidationError);
}

TEST_CASE("triangular solves") {
    const CMatrix y = oracle::random_matrix(6, 3, 10);
    CHECK(trsm_right_upper_ct(y, CMatrix::identity(3)) == y);
    const CMatrix z = trsm_right_upper_ct(CMatrix{{2.0, 4.0}}, CMatrix{{2.0, 0.0}, {0.0, 4.0}});
    CHECK(z(0, 0) == cplx(1.0));
    CHECK(z(0, 1) == cplx(1.0));

    const CMatrix g = oracle::random_matrix(10, 3, 11);
    const CMatrix l = cholesky(gemm(g, g, Op::conj_trans));
    CHECK(fro_norm(gemm(trsm_right_upper_ct(y, l), l, Op::none, Op::conj_trans) - y) <= 1e-12 * fro_norm(y));
    const CMatrix b = oracle::random_matrix(3, 2, 12);
    CHECK(fro_norm(gemm(l, trsm_lower(l, b)) - b) <= 1e-12 * fro_norm(b));
    CHECK(fro_norm(gemm(l, trsm_lower_ct(l, b), Op::conj_trans) - b) <= 1e-12 * fro_norm(b));

    try {
        trsm_lower(CMatrix{{1.0, 0.0}, {1.0, 0.0}}, b.block(0, 0, 2, 2));
        FAIL("expected SingularTriangular");
    } catch (const SingularTriangular& e) {
        CHECK(e.index == 1);
    }
}

TEST_CASE("small Hermitian EVD") {
    auto d = hermitian_evd_small(CMatrix{{3.0, 0.0}, {0.0, 1.0}});
    CHECK(d.values[0] == doctest::Approx(3.0));
    CHECK(d.values[1] == doctest::Approx(1.0));
    CHECK(std::abs(d.vectors(0, 0)) == doctest::Approx(1.0));

    d = hermitian_evd_small(CMatrix{{2.0, 1.0}, {1.0, 2.0}});
    CHECK(d.values[0] == doctest::Approx(3.0));
    CHECK(d.values[1] == doctest::Approx(1.0));

    const CMatrix g = oracle::random_matrix(8, 8, 13);
    const CMatrix b = hermitian_part(g);
    const auto e = hermitian_evd_small(b);
    const auto o = full_evd_oracle(b, 1e-16);
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(e.values[i] - o.values[i]) <= 1e-9);
    CHECK(orthonormality_error(e.vectors) <= 1e-10);
    CMatrix vl = e.vectors;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) vl(i, j) *= e.values[j];
    CHECK(fro_norm(gemm(b, e.vectors) - vl) <= 1e-10 * fro_norm(b));
    double sum = 0.0;
    for (double v : e.values) sum += v;
    CHECK(std::abs(sum - trace(b).real()) <= 1e-10 * std::abs(trace(b).real()) + 1e-12);
    for (std::size_t i = 1; i < 8; ++i) CHECK(e.values[i - 1] >= e.values[i]);

    CHECK_THROWS_AS(hermitian_evd_small(g), ValidationError);
    CHECK_THROWS_AS(hermitian_evd_small(CMatrix::identity(65)), ValidationError);
}

TEST_CASE("norms and oracles") {
    CHECK(fro_norm(CMatrix::identity(4)) == doctest::Approx(2.0));
    CHECK(fro_norm(CMatrix(3, 3)) == 0.0);
    CHECK(fro_norm(CMatrix{{3.0, cplx(0.0, 4.0)}}) == doctest::Approx(5.0));

    std::vector<double> d{1.0, 2.0, 3.0, 4.0};
    auto e = full_evd_oracle(CMatrix::diagonal(d));
    CHECK(e.values == std::vector<double>{4.0, 3.0, 2.0, 1.0});
    e = full_evd_oracle(CMatrix::identity(5));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0));

    const CMatrix v = oracle::random_unitary(12, 14);
    std::vector<double> lam{9.0, 7.5, 6.0, 5.0, 4.0, 3.0, 2.5, 2.0, 1.5, 1.0, 0.5, 0.25};
    e = full_evd_oracle(oracle::from_spectrum(v, lam));
    for (std::size_t i = 0; i < lam.size(); ++i) CHECK(std::abs(e.values[i] - lam[i]) <= 1e-9);

    CHECK(direct_inverse_oracle(CMatrix::identity(3)) == CMatrix::identity(3));
    const CMatrix inv = direct_inverse_oracle(CMatrix{{2.0, 0.0}, {0.0, 4.0}});
    CHECK(inv(0, 0).real() == doctest::Approx(0.5));
    CHECK(inv(1, 1).real() == doctest::Approx(0.25));
    const CMatrix g = oracle::random_matrix(16, 16, 15);
    CMatrix hpd = gemm(g, g, Op::conj_trans);
    hpd += CMatrix::identity(16);
    CHECK(fro_norm(gemm(hpd, direct_inverse_oracle(hpd)) - CMatrix::identity(16)) <= 1e-10 * 4.0);
}

TEST_CASE("flop counter merge and prefixes") {
    FlopCounter a, b;
    a.add("gemm", 10, 5);
    b.add("gemm", 3, 1);
    b.add("gram", 2, 2);
    a.merge(b, "qrc.");
    CHECK(a.multiplies() == 15);
    CHECK(a.sum_prefix("qrc.").mul == 5);
    CHECK(a.breakdown().at("qrc.gram").add == 2);
}
