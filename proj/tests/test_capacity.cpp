#include <gtest/gtest.h>

#include <cmath>

#include "crafterlab/analytics/capacity.hpp"
#include "crafterlab/core/rng.hpp"
#include "oracles.hpp"

using namespace crafterlab;

namespace {

ChannelMatrix channel(std::vector<std::vector<double>> rows) {
  ChannelMatrix ch;
  ch.rows = std::move(rows);
  return ch;
}

std::vector<std::vector<double>> random_channel(Engine& rng, std::size_t n, std::size_t m) {
  std::vector<std::vector<double>> w(n, std::vector<double>(m));
  for (auto& row : w) {
    double s = 0.0;
    for (auto& v : row) {
      // Sparse rows exercise zero entries.
      v = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
      s += v;
    }
    if (s == 0.0) {
      row[uniform_index(rng, static_cast<std::uint32_t>(m))] = 1.0;
      s = 1.0;
    }
    for (auto& v : row) v /= s;
  }
  return w;
}

}  // namespace

TEST(Capacity, NoiselessChannelIsLnN) {
  for (std::size_t n : {2, 3, 5, 8}) {
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) w[i][i] = 1.0;
    const auto r = channel_capacity(channel(w));
    EXPECT_NEAR(r.capacity, std::log(static_cast<double>(n)), 1e-9);
    EXPECT_TRUE(r.converged);
  }
}

TEST(Capacity, UselessChannelIsZero) {
  const auto r = channel_capacity(channel({{0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}}));
  EXPECT_NEAR(r.capacity, 0.0, 1e-12);
  EXPECT_TRUE(r.converged);
}

TEST(Capacity, ZChannelMatchesClosedFormAndGrid) {
  const std::vector<std::vector<double>> w = {{1.0, 0.0}, {0.5, 0.5}};
  const auto r = channel_capacity(channel(w));
  EXPECT_NEAR(r.capacity, std::log(1.25), 1e-9);
  EXPECT_NEAR(nats_to_bits(r.capacity), 0.321928, 1e-6);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(oracle::grid_search_capacity(w), std::log(1.25), 1e-7);
  // Optimal input p(b) = 2/5 for this channel.
  EXPECT_NEAR(r.input_distribution[1], 0.4, 1e-3);
}

TEST(Capacity, AgreesWithGridSearch) {
  Engine rng = make_engine(2024);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + trial % 2, m = 2 + trial % 4;
    const auto w = random_channel(rng, n, m);
    const auto r = channel_capacity(channel(w));
    const double grid = oracle::grid_search_capacity(w);
    EXPECT_NEAR(r.capacity, grid, 1e-6) << "trial " << trial;
    EXPECT_GE(r.upper_bound + 1e-12, r.capacity);
    EXPECT_NEAR(oracle::mutual_information(r.input_distribution, w), r.capacity, 1e-6);
  }
}

TEST(Capacity, BoundedByLogOfAlphabetSizes) {
  Engine rng = make_engine(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 5, m = 2 + trial % 7;
    const auto r = channel_capacity(channel(random_channel(rng, n, m)));
    EXPECT_GE(r.capacity, 0.0);
    EXPECT_LE(r.capacity, std::log(static_cast<double>(std::min(n, m))) + 1e-9);
  }
}

TEST(Capacity, InvalidChannels) {
  EXPECT_THROW(channel_capacity(channel({{0.5, 0.4}, {0.5, 0.5}})), InputError);
  EXPECT_THROW(channel_capacity(channel({{1.5, -0.5}})), InputError);
  EXPECT_THROW(channel_capacity(channel({})), InputError);
  EXPECT_THROW(channel_capacity(channel({{1.0}, {0.5, 0.5}})), InputError);
}

TEST(Capacity, IterationCapFlagsUnconverged) {
  CapacityOptions opt;
  opt.max_iter = 1;
  const auto r = channel_capacity(channel({{1.0, 0.0}, {0.5, 0.5}}), opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_LE(r.capacity, std::log(1.25) + 1e-12);
}
