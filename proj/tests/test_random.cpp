// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>
#include <vector>

#include "fso/random.hpp"

using fso::RandomStream;

TEST_CASE("identical seeds replay identical streams") {
  RandomStream a(12345);
  RandomStream b(12345);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.bits() == b.bits());
  }
  RandomStream c(12345);
  RandomStream d(12345);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.normal() == d.normal());
    CHECK(c.uniform() == d.uniform());
  }
}

TEST_CASE("different seeds and partitions give distinct streams") {
  std::set<std::uint64_t> first_draws;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 999ULL, 1ULL << 40}) {
    first_draws.insert(RandomStream(seed).bits());
  }
  CHECK(first_draws.size() == 5);

  std::set<std::uint64_t> partition_draws;
  for (std::uint64_t p = 0; p < 16; ++p) {
    partition_draws.insert(RandomStream::for_partition(7, p).bits());
  }
  CHECK(partition_draws.size() == 16);

  // partition k of seed s must not collide with the base stream of seed s+k
  CHECK(RandomStream::for_partition(1, 1).bits() != RandomStream(2).bits());
}

TEST_CASE("uniform draws live in the half-open unit interval") {
  RandomStream stream(77);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = stream.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  // mean of n uniforms: sd = 1/sqrt(12 n); allow 5 sigma
  CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("normal draws have unit variance and zero mean") {
  RandomStream stream(4242);
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0, sum_cube = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = stream.normal();
    sum += z;
    sum_sq += z * z;
    sum_cube += z * z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  const double skew = sum_cube / n;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  // var of sample variance for a Gaussian is 2/n
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
  // third moment has variance 15/n
  CHECK(std::abs(skew) < 5.0 * std::sqrt(15.0 / n));
}

TEST_CASE("uniform integers are unbiased over their range") {
  RandomStream stream(99);
  std::vector<int> counts(8, 0);
  const int n = 800000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = stream.uniform_int(8);
    REQUIRE(v < 8);
    ++counts[static_cast<size_t>(v)];
  }
  for (int c : counts) {
    // binomial sd = sqrt(n p (1-p)), p = 1/8; allow 5 sigma
    CHECK(std::abs(c - n / 8.0) < 5.0 * std::sqrt(n * (1.0 / 8.0) * (7.0 / 8.0)));
  }
}

TEST_CASE("thread budget honours the environment cap") {
  const std::string saved =
      std::getenv("FSO_LINKLAB_THREADS") ? std::getenv("FSO_LINKLAB_THREADS") : "";
  setenv("FSO_LINKLAB_THREADS", "1", 1);
  CHECK(fso::thread_budget() == 1);
  setenv("FSO_LINKLAB_THREADS", "2", 1);
  CHECK(fso::thread_budget() <= 2);
  CHECK(fso::thread_budget() >= 1);
  setenv("FSO_LINKLAB_THREADS", "0", 1);  // nonsense values are ignored
  CHECK(fso::thread_budget() >= 1);
  if (saved.empty()) {
    unsetenv("FSO_LINKLAB_THREADS");
  } else {
    setenv("FSO_LINKLAB_THREADS", saved.c_str(), 1);
  }
  CHECK(fso::thread_budget() >= 1);
}
