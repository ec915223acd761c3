#include <gtest/gtest.h>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "support.hpp"

using namespace threebody;

TEST(Reference, JacobiAgainstBoost) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> uu(-8, 8), um(0, 0.99);
  for (int i = 0; i < 500; ++i) {
    const double u = uu(rng), m = um(rng), k = std::sqrt(m);
    double cn = 0, dn = 0;
    const double sn = boost::math::jacobi_elliptic(k, u, &cn, &dn);
    const JacobiTriple j = jacobi_elliptic(u, m);
    EXPECT_NEAR(j.sn, sn, 1e-13);
    EXPECT_NEAR(j.cn, cn, 1e-13);
    EXPECT_NEAR(j.dn, dn, 1e-13);
  }
  for (double m : {0.0, 0.3, 0.9}) EXPECT_NEAR(elliptic_k(m), boost::math::ellint_1(std::sqrt(m)), 1e-14);
}

TEST(Reference, ImaginaryModulusSeries) {
  // Maclaurin series of sn(u, k) with k^2 -> -k^2.
  const double k = 0.5, m = -k * k;
  for (double u : {0.01, 0.05, 0.1}) {
    const double u3 = u * u * u, u5 = u3 * u * u, u7 = u5 * u * u;
    const double series = u - (1 + m) * u3 / 6 + (1 + 14 * m + m * m) * u5 / 120 -
                          (1 + 135 * m + 135 * m * m + m * m * m) * u7 / 5040;
    EXPECT_NEAR(sn_imaginary_modulus(u, k), series, 1e-12);
  }
}

TEST(Reference, Harmonic) {
  EXPECT_NEAR(harmonic_P(0, 2, 0, 3), 2.0, 1e-15);
  EXPECT_NEAR(harmonic_P(M_PI / 6, 2, 0, 3), 0.0, 1e-15);
  EXPECT_NEAR(closed_form_energy(HarmonicCos2{2, 0, 3}), 6.0, 1e-15);
}

// H_P = 3 P P_P^2 + A P + B P^2 is constant along the closed forms.
TEST(Reference, PhaseSpaceCubic) {
  for (int i = 1; i <= 100; ++i) {
    const double t = 0.0137 * i;
    const double P = harmonic_P(t, 1.0, 0.3, 3.0), p = harmonic_PP(t, 1.0, 0.3, 3.0);
    EXPECT_NEAR(3 * P * p * p + 3.0 * P, 3.0, 1e-10);
    const double Pa = anharmonic_P(t + 0.01, 1.0, 1.0, 0.5), pa = anharmonic_PP(t + 0.01, 1.0, 1.0, 0.5);
    EXPECT_NEAR(3 * Pa * pa * pa + Pa + Pa * Pa, 4.0 / 9.0, 1e-10);
  }
}

TEST(Reference, Anharmonic) {
  EXPECT_EQ(anharmonic_P(0, 1, 1, 0.5), 0.0);
  const double per = anharmonic_period(1, 0.5), amp = anharmonic_amplitude(1, 1, 0.5);
  double peak = 0;
  for (int i = 0; i <= 1000; ++i) peak = std::max(peak, anharmonic_P(per * i / 1000.0, 1, 1, 0.5));
  EXPECT_LE(peak, amp * (1 + 1e-15));
  EXPECT_NEAR(peak, amp, 1e-6 * amp);
  EXPECT_NEAR(anharmonic_P(per, 1, 1, 0.5), 0.0, 1e-12);
  try {
    anharmonic_P(0.1, 1, 1, 1.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateModulus);
  }
}

TEST(Reference, SmallBApproachesHarmonicPeriod) {
  // At fixed energy E the modulus solves A^2 k^2 / (B (1 - k^2)^2) = E.
  const double A = 1.0, E = 0.5;
  double prev = 0;
  for (double B : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double x = B * E / (A * A);  // k^2 / (1 - k^2)^2 = x
    const double k2 = (2 * x + 1 - std::sqrt(4 * x + 1)) / (2 * x);
    const double ratio = anharmonic_period(A, std::sqrt(k2)) / (M_PI / std::sqrt(3 * A));
    EXPECT_GT(std::abs(ratio - 1), 0.0);
    if (prev) {
      EXPECT_LT(std::abs(ratio - 1), std::abs(prev - 1));
    }
    prev = ratio;
  }
  EXPECT_NEAR(prev, 1.0, 1e-3);
}

TEST(Reference, Weierstrass) {
  EXPECT_EQ(weierstrass_residual(0, 0), 0.0);
  const double smax = weierstrass_s_max();
  EXPECT_NEAR(smax, (9 * std::sqrt(3.0) - 13.5) / 8, 1e-15);
  EXPECT_NEAR(smax, 0.261058, 1e-6);
  EXPECT_NEAR(weierstrass_residual(smax, 0), 0.0, 1e-13);
  const auto c = lemniscate_consistency(20);
  EXPECT_LT(c.max_relative_error, 1e-8);
}
