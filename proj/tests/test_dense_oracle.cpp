#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "krondet/closed_form.hpp"
#include "krondet/dense_oracle.hpp"
#include "krondet/generator.hpp"

using namespace krondet;

namespace {

DenseMatrix<mpq_class> random_int_matrix(SplitMix64& rng, std::size_t n) {
  return matrix_cast<mpq_class>(
      detail::draw_matrix(rng, n, n, Profile::kIntegerSmall));
}

}  // namespace

TEST_SUITE("kronecker product") {
  TEST_CASE("identities and small cases") {
    CHECK(kron(DenseMatrix<double>::identity(2), DenseMatrix<double>::identity(3)) ==
          DenseMatrix<double>::identity(6));

    const DenseMatrix<double> swap{{0.0, 1.0}, {1.0, 0.0}};
    const DenseMatrix<double> two{{2.0}};
    CHECK(kron(swap, two) == DenseMatrix<double>{{0.0, 2.0}, {2.0, 0.0}});
  }

  TEST_CASE("left operand carries the block indices") {
    SplitMix64 rng(2);
    const auto a = detail::draw_matrix(rng, 2, 3, Profile::kUniform);
    const auto b = detail::draw_matrix(rng, 4, 2, Profile::kUniform);
    const auto k = kron(a, b);
    REQUIRE(k.rows() == 8);
    REQUIRE(k.cols() == 6);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t r = 0; r < 4; ++r) {
          for (std::size_t c = 0; c < 2; ++c) {
            CHECK(k(i * 4 + r, j * 2 + c) == a(i, j) * b(r, c));
          }
        }
      }
    }
  }

  TEST_CASE("det(kron(A,B)) = det(A)^nb * det(B)^na, float") {
    SplitMix64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = detail::draw_matrix(rng, 2, 2, Profile::kUniform);
      const auto b = detail::draw_matrix(rng, 3, 3, Profile::kUniform);
      const auto lhs = lu_sign_log_det(kron(a, b));
      const auto rhs = lu_sign_log_det(a).pow(3) * lu_sign_log_det(b).pow(2);
      REQUIRE(lhs.sign() == rhs.sign());
      if (lhs.sign() != 0) {
        CHECK(lhs.log_abs() == doctest::Approx(rhs.log_abs()).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("det(kron(A,B)) identity is exact for every size pair up to 4") {
    SplitMix64 rng(6);
    for (std::size_t na = 1; na <= 4; ++na) {
      for (std::size_t nb = 1; nb <= 4; ++nb) {
        const auto a = random_int_matrix(rng, na);
        const auto b = random_int_matrix(rng, nb);
        const mpq_class lhs = bareiss_det(kron(a, b));
        const mpq_class rhs =
            rational_pow(bareiss_det(a), static_cast<unsigned long>(nb)) *
            rational_pow(bareiss_det(b), static_cast<unsigned long>(na));
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_SUITE("outer product") {
  TEST_CASE("basis cases") {
    CHECK(outer<double>({1.0, 0.0}, {0.0, 1.0}) ==
          DenseMatrix<double>{{0.0, 1.0}, {0.0, 0.0}});
    CHECK(outer<double>({0.0, 1.0}, {0.0, 1.0}) ==
          DenseMatrix<double>{{0.0, 0.0}, {0.0, 1.0}});
  }

  TEST_CASE("rank one: determinant vanishes for N >= 2") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
      const auto n = static_cast<std::size_t>(rng.next_int(2, 5));
      std::vector<mpq_class> x, y;
      for (std::size_t i = 0; i < n; ++i) {
        x.push_back(mpq_class(rng.next_int(-9, 9), rng.next_int(1, 9)));
        y.push_back(mpq_class(rng.next_int(-9, 9), rng.next_int(1, 9)));
      }
      CHECK(bareiss_det(outer(x, y)) == 0);
    }
  }

  TEST_CASE("length mismatch") {
    CHECK_THROWS_AS(outer<double>({1.0}, {1.0, 2.0}), shape_error);
    CHECK_THROWS_AS(outer<double>({}, {}), shape_error);
  }
}

TEST_SUITE("materialize") {
  TEST_CASE("identity instance materializes to the identity") {
    const auto inst = random_instance<double>(3, 2, 0, Profile::kIdentity);
    CHECK(materialize(inst) == DenseMatrix<double>::identity(6));
  }

  TEST_CASE("F=1 equals the direct rank-one expansion") {
    const auto inst = random_instance<mpq_class>(4, 1, 3, Profile::kIntegerSmall);
    DenseMatrix<mpq_class> expected(4, 4);
    for (int n = 0; n < 4; ++n) {
      const mpq_class& a = inst.a(n)(0, 0);
      const auto xo = outer(inst.x_col(n), inst.y_col(n));
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) expected(i, j) += a * xo(i, j);
      }
    }
    CHECK(materialize(inst) == expected);
  }

  TEST_CASE("X=Y=I gives a shuffled block diagonal of the A factors") {
    SplitMix64 rng(12);
    const int n = 3, f = 2;
    std::vector<DenseMatrix<double>> a;
    for (int k = 0; k < n; ++k) {
      a.push_back(detail::draw_matrix(rng, f, f, Profile::kUniform));
    }
    const KronRankOneInstance<double> inst(a, DenseMatrix<double>::identity(n),
                                           DenseMatrix<double>::identity(n));
    const auto g = materialize(inst);

    // G[(fi, k), (gj, l)] = delta_kl * A^(k)(fi, gj)
    for (std::size_t fi = 0; fi < 2; ++fi) {
      for (std::size_t gj = 0; gj < 2; ++gj) {
        for (std::size_t k = 0; k < 3; ++k) {
          for (std::size_t l = 0; l < 3; ++l) {
            const double want = (k == l) ? a[k](fi, gj) : 0.0;
            CHECK(g(fi * 3 + k, gj * 3 + l) == want);
          }
        }
      }
    }

    const auto det = lu_sign_log_det(g);
    auto expected = SignLogDet::one();
    for (const auto& m : a) expected *= lu_sign_log_det(m);
    REQUIRE(det.sign() == expected.sign());
    CHECK(det.log_abs() == doctest::Approx(expected.log_abs()).epsilon(1e-12));
  }

  TEST_CASE("linearity in each A factor") {
    const auto inst = random_instance<mpq_class>(3, 2, 21, Profile::kIntegerSmall);
    SplitMix64 rng(22);
    const auto delta = matrix_cast<mpq_class>(
        detail::draw_matrix(rng, 2, 2, Profile::kIntegerSmall));
    const int k = 1;

    auto bumped = inst.a_factors();
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) bumped[k](i, j) += delta(i, j);
    }
    const KronRankOneInstance<mpq_class> inst_bumped(bumped, inst.x(), inst.y());

    std::vector<DenseMatrix<mpq_class>> only_delta(
        3, DenseMatrix<mpq_class>(2, 2));
    only_delta[k] = delta;
    const KronRankOneInstance<mpq_class> inst_delta(only_delta, inst.x(), inst.y());

    const auto g0 = materialize(inst);
    const auto g1 = materialize(inst_bumped);
    const auto gd = materialize(inst_delta);
    for (std::size_t i = 0; i < g0.rows(); ++i) {
      for (std::size_t j = 0; j < g0.cols(); ++j) {
        CHECK(g1(i, j) == g0(i, j) + gd(i, j));
      }
    }
  }
}

TEST_SUITE("materialized determinant") {
  TEST_CASE("identity and singular cases") {
    const auto id = random_instance<double>(2, 2, 0, Profile::kIdentity);
    const auto d = materialized_det(id);
    CHECK(d.sign() == 1);
    CHECK(d.log_abs() == 0.0);

    const auto sy = random_instance<mpq_class>(3, 2, 5, Profile::kSingularY);
    CHECK(materialized_det(sy).sign() == 0);
  }

  TEST_CASE("dimension cap") {
    const auto inst = random_instance<double>(3, 2, 1, Profile::kUniform);
    CHECK_THROWS_AS(materialized_det(inst, 4), resource_error);
    CHECK_NOTHROW(materialized_det(inst, 6));
  }
}

TEST_SUITE("leibniz determinant") {
  TEST_CASE("small explicit cases") {
    CHECK(leibniz_det(DenseMatrix<double>::identity(3)) == 1.0);
    CHECK(leibniz_det(DenseMatrix<double>{{1.0, 2.0}, {3.0, 4.0}}) == -2.0);
    CHECK(leibniz_det(DenseMatrix<mpq_class>{{mpq_class(1)}}) == 1);
  }

  TEST_CASE("limits and shapes") {
    CHECK_THROWS_AS(leibniz_det(DenseMatrix<double>(10, 10)), resource_error);
    CHECK_THROWS_AS(leibniz_det(DenseMatrix<double>(2, 3)), shape_error);
  }

  TEST_CASE("matches LU on a random 5x5") {
    SplitMix64 rng(31);
    const auto m = detail::draw_matrix(rng, 5, 5, Profile::kUniform);
    const double direct = leibniz_det(m);
    const auto lu = lu_sign_log_det(m).value().value;
    CHECK(std::fabs(direct - lu) <= 1e-10 * std::max(1.0, std::fabs(lu)));
  }

  TEST_CASE("agrees with elimination on 1000 random matrices up to size 6") {
    SplitMix64 rng(33);
    for (int trial = 0; trial < 500; ++trial) {
      const auto n = static_cast<std::size_t>(rng.next_int(1, 6));
      const auto m = random_int_matrix(rng, n);
      CHECK(leibniz_det(m) == bareiss_det(m));
    }
    for (int trial = 0; trial < 500; ++trial) {
      const auto n = static_cast<std::size_t>(rng.next_int(1, 6));
      const auto m = detail::draw_matrix(rng, n, n, Profile::kUniform);
      const double lhs = leibniz_det(m);
      const double rhs = lu_sign_log_det(m).value().value;
      CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(rhs)));
    }
  }
}

TEST_SUITE("end-to-end identity spot checks") {
  TEST_CASE("closed form equals the materialized determinant") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = random_instance<mpq_class>(3, 2, seed, Profile::kIntegerSmall);
      CHECK(closed_form_value(inst).value == bareiss_det(materialize(inst)));
    }
  }
}
