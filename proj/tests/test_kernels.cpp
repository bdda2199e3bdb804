#include "doctest.h"
#include "helpers.hpp"

#include "lognabla/kernels.hpp"

using namespace lognabla;

TEST_CASE("digit streams") {
  DigitStream m1 = DigitStream::from_rational(5, -1, 1, 12);
  for (auto d : m1.digits) CHECK(d == 4);
  CHECK_FALSE(m1.terminates);
  DigitStream half = DigitStream::from_rational(5, 1, 2, 12);
  CHECK(half.digits[0] == 3);  // 2 * 3 = 6 = 1 mod 5
  DigitStream z = half - half;
  CHECK(z.nonzero.empty());
  DigitStream sum = DigitStream::from_rational(5, 7, 1, 12) - DigitStream::from_rational(5, 3, 1, 12);
  CHECK(sum == DigitStream::from_rational(5, 4, 1, 12));
  CHECK((-DigitStream::from_rational(5, 1, 1, 12)).digits == m1.digits);
}

TEST_CASE("serial and parallel scans agree") {
  CHECK(rational_scan_serial(5, 1, 2, 1, 5000) == rational_scan_omp(5, 1, 2, 1, 5000));
  CHECK(rational_scan_serial(3, -7, 4, 0, 3000) == rational_scan_omp(3, -7, 4, 0, 3000));
  DigitStream l = DigitStream::from_positions(2, {1, 2, 4, 16, 1000}, 4096);
  CHECK(stream_scan_serial(l, 1, 20000) == stream_scan_omp(l, 1, 20000));
  CHECK(falling_min_serial(5, 0, 1, 60, 400) == falling_min_omp(5, 0, 1, 60, 400));
  CHECK(falling_min_serial(5, 1, 2, 60, 400) == falling_min_omp(5, 1, 2, 60, 400));
}

TEST_CASE("scan sentinels") {
  auto r = rational_scan_serial(5, 3, 1, 1, 5);
  CHECK(r[2] == kScanSkip);
  CHECK(r[0] == 0);
  DigitStream four = DigitStream::from_rational(2, 4, 1, 8);
  CHECK(stream_scan_serial(four, 4, 4)[0] == kScanSkip);
  DigitStream open = DigitStream::from_positions(2, {2}, 8);
  CHECK(stream_scan_serial(open, 4, 4)[0] == kScanExhausted);
}

TEST_CASE("falling factorial minimum equals v(n!)") {
  auto v = falling_min_serial(5, 0, 1, 50, 50 + 2 * 125);
  for (int n = 0; n <= 50; ++n) CHECK(v[n] == testing::legendre(n, 5));
  // Shift by 1/2: factors 2m + 1 never vanish.
  auto h = falling_min_serial(5, 1, 2, 50, 300);
  for (int n = 0; n <= 50; ++n) CHECK(h[n] <= testing::legendre(n, 5) + 0);
}
