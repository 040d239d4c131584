#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "mhpc/similarity.hpp"

using namespace mhpc;

namespace {

Matrix random_unit(Eigen::Index n, Eigen::Index k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix m(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = u(rng);
    }
    return m;
}

Vector sorted_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.eigenvalues();
}

}  // namespace

TEST_SUITE("similarity") {

TEST_CASE("similarity examples") {
    SUBCASE("identical rows") {
        Matrix y(2, 3);
        y << 1, 0, 1, 1, 0, 1;
        const auto g = pairwise_similarity(y, Vector::Ones(3), 0.7);
        CHECK(g.weights(0, 1) == 1.0);
        CHECK(g.weights(0, 0) == 0.0);
    }
    SUBCASE("zero support") {
        Matrix y(3, 2);
        y << 1, 0, 0, 1, 0.5, 0.5;
        const auto g = pairwise_similarity(y, Vector::Zero(2), 1.0);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) CHECK(g.weights(i, j) == (i == j ? 0.0 : 1.0));
        }
        CHECK(g.degree(0) == 2.0);
    }
    SUBCASE("single label, unit distance") {
        Matrix y(2, 1);
        y << 1, 0;
        const auto g = pairwise_similarity(y, Vector::Ones(1), 1.0);
        CHECK(g.weights(0, 1) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    }
    SUBCASE("support weights the squared differences") {
        Matrix y(2, 2);
        y << 1, 1, 0, 0;
        Vector s(2);
        s << 0.25, 0.75;
        const auto d = weighted_distances(y, s);
        CHECK(d(0, 1) == doctest::Approx(1.0));
        CHECK(pairwise_similarity(y, s, 2.0).weights(1, 0) == doctest::Approx(std::exp(-0.5)));
    }
}

TEST_CASE("invalid inputs") {
    Matrix y = Matrix::Zero(2, 2);
    CHECK_THROWS(pairwise_similarity(y, Vector::Ones(2), 0.0));
    CHECK_THROWS(pairwise_similarity(y, Vector::Ones(2), -1.0));
    CHECK_THROWS(pairwise_similarity(y, Vector::Ones(3), 1.0));
    y(0, 0) = std::nan("");
    CHECK_THROWS(pairwise_similarity(y, Vector::Ones(2), 1.0));
}

TEST_CASE("median bandwidth") {
    Matrix d(4, 4);
    d << 0, 1, 0, 3,
         1, 0, 2, 0,
         0, 2, 0, 4,
         3, 0, 4, 0;
    CHECK(median_bandwidth(d) == 2.5);
    d(0, 3) = d(3, 0) = 0;
    CHECK(median_bandwidth(d) == 2.0);
    CHECK(median_bandwidth(Matrix::Zero(3, 3)) == 1.0);
}

TEST_CASE("laplacian examples") {
    SimilarityGraph pair{Matrix(2, 2), Vector(2), 1.0};
    pair.weights << 0, 1, 1, 0;
    pair.degree << 1, 1;
    const auto l = normalized_laplacian(pair);
    Matrix expect(2, 2);
    expect << 1, -1, -1, 1;
    CHECK(l.entries == expect);
    const Vector ev = sorted_eigenvalues(l.entries);
    CHECK(std::fabs(ev(0)) < 1e-12);
    CHECK(std::fabs(ev(1) - 2.0) < 1e-12);

    SimilarityGraph tri{Matrix::Constant(3, 3, 0.4), Vector::Constant(3, 0.8), 1.0};
    tri.weights.diagonal().setZero();
    const Vector ev3 = sorted_eigenvalues(normalized_laplacian(tri).entries);
    CHECK(std::fabs(ev3(0)) < 1e-12);
    CHECK(std::fabs(ev3(1) - 1.5) < 1e-12);
    CHECK(std::fabs(ev3(2) - 1.5) < 1e-12);

    SimilarityGraph isolated{Matrix::Zero(2, 2), Vector::Zero(2), 1.0};
    CHECK_THROWS_AS(normalized_laplacian(isolated), GraphError);
}

TEST_CASE("trace form equals the normalized pairwise sum") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 5 + trial * 2;
        const Eigen::Index k = 4;
        const Matrix y = random_unit(n, k, rng);
        const Matrix f = random_unit(n, k, rng);
        const Vector s = random_unit(k, 1, rng);
        const auto g = pairwise_similarity(y, s, 0.5);
        const auto l = normalized_laplacian(g);
        const double trace = (f.transpose() * l.entries * f).trace();
        double pairwise = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const Eigen::RowVectorXd diff = f.row(i) / std::sqrt(g.degree(i)) -
                                                f.row(j) / std::sqrt(g.degree(j));
                pairwise += g.weights(i, j) * diff.squaredNorm();
            }
        }
        CHECK(std::fabs(trace - 0.5 * pairwise) <= 1e-8 * std::fabs(trace));
    }
}

TEST_CASE("graph properties") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix y = random_unit(12, 5, rng);
        const Vector s = random_unit(5, 1, rng);
        const auto g = pairwise_similarity(y, s, 0.3);
        const auto wider = pairwise_similarity(y, s, 0.6);
        const Matrix d = weighted_distances(y, s);
        CHECK(g.weights == g.weights.transpose());
        for (Eigen::Index i = 0; i < 12; ++i) {
            for (Eigen::Index j = 0; j < 12; ++j) {
                CHECK(g.weights(i, j) >= 0.0);
                CHECK(g.weights(i, j) <= 1.0);
                if (i != j && d(i, j) > 0) CHECK(wider.weights(i, j) > g.weights(i, j));
            }
        }
        const auto l = normalized_laplacian(g);
        for (int r = 0; r < 10; ++r) {
            Vector x(12);
            for (auto& v : x) v = gauss(rng);
            CHECK(x.dot(l.entries * x) >= -1e-12);
        }
    }
}

}
