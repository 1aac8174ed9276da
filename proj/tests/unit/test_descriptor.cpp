#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "flowermatch/descriptor.hpp"
#include "flowermatch/error.hpp"
#include "test_support.hpp"

namespace flowermatch {
namespace {

using testing::equilateral_triangle;
using testing::random_cluster;

TEST(Centroid, Examples) {
  Cluster mid;
  mid.points = {Point3(0, 0, 0), Point3(2, 0, 0)};
  EXPECT_EQ(centroid(mid), Point3(1, 0, 0));

  Cluster single;
  single.points = {Point3(0.3, -1.2, 4.0)};
  EXPECT_EQ(centroid(single), single.points[0]);

  const Point3 c = centroid(equilateral_triangle());
  EXPECT_NEAR(c.x(), 0.5, 1e-15);
  EXPECT_NEAR(c.y(), std::sqrt(3.0) / 6.0, 1e-15);
  EXPECT_NEAR(c.z(), 0.0, 1e-15);
}

TEST(Centroid, EmptyClusterThrows) {
  try {
    centroid(Cluster{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCluster);
  }
}

TEST(ComputeDescriptor, UnitEquilateralTriangle) {
  // Circumradius s/sqrt(3); inertia 3 * s^2/3.
  const Descriptor d = compute_descriptor(equilateral_triangle());
  EXPECT_NEAR(d.inertia, 1.0, 1e-15);
  EXPECT_NEAR(d.avg_distance, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(d.avg_distance, 0.57735, 1e-5);
}

TEST(ComputeDescriptor, CoincidentPointsGiveZero) {
  Cluster c;
  c.points.assign(4, Point3(0.2, 0.4, 0.9));
  const Descriptor d = compute_descriptor(c);
  EXPECT_EQ(d.inertia, 0.0);
  EXPECT_EQ(d.avg_distance, 0.0);
}

TEST(ComputeDescriptor, TooFewPoints) {
  Cluster c;
  c.points = {Point3(1, 2, 3)};
  try {
    compute_descriptor(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
}

TEST(ComputeDescriptor, MatchesLonghandReferenceAndFlatState) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 500; ++i) {
    const Cluster c = random_cluster(gen, 2 + i % 5);
    const Descriptor d = compute_descriptor(c);
    const Descriptor ref = testing::reference_descriptor(c.points);
    EXPECT_NEAR(d.inertia, ref.inertia, 1e-12);
    EXPECT_NEAR(d.avg_distance, ref.avg_distance, 1e-12);
    const Eigen::VectorXd flat = flatten(c.points);
    const Descriptor f = descriptor_from_state({flat.data(), static_cast<std::size_t>(flat.size())});
    EXPECT_NEAR(f.inertia, d.inertia, 1e-12);
    EXPECT_NEAR(f.avg_distance, d.avg_distance, 1e-12);
  }
}

TEST(ComputeDescriptor, TranslationLeavesDescriptorUnchanged) {
  Cluster c = equilateral_triangle();
  const Descriptor before = compute_descriptor(c);
  for (auto& p : c.points) p += Point3(3.5, -2.0, 10.0);
  const Descriptor after = compute_descriptor(c);
  EXPECT_NEAR(after.inertia, before.inertia, 1e-12);
  EXPECT_NEAR(after.avg_distance, before.avg_distance, 1e-12);
}

class DescriptorProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(DescriptorProperties, RigidMotionPermutationAndScale) {
  std::mt19937_64 gen(GetParam());
  std::uniform_real_distribution<double> u(-5, 5), s(0.1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const Cluster c = random_cluster(gen, 2 + trial % 7);
    const Descriptor d = compute_descriptor(c);

    Cluster moved = c;
    const Eigen::Matrix3d r = testing::random_rotation(gen);
    const Point3 t(u(gen), u(gen), u(gen));
    for (auto& p : moved.points) p = r * p + t;
    const Descriptor dm = compute_descriptor(moved);
    EXPECT_NEAR(dm.inertia, d.inertia, 1e-9);
    EXPECT_NEAR(dm.avg_distance, d.avg_distance, 1e-9);

    Cluster shuffled = c;
    std::shuffle(shuffled.points.begin(), shuffled.points.end(), gen);
    const Descriptor ds = compute_descriptor(shuffled);
    EXPECT_NEAR(ds.inertia, d.inertia, 1e-12);
    EXPECT_NEAR(ds.avg_distance, d.avg_distance, 1e-12);

    const double k = s(gen);
    Cluster scaled = c;
    for (auto& p : scaled.points) p *= k;
    const Descriptor dk = compute_descriptor(scaled);
    EXPECT_NEAR(dk.avg_distance / (k * d.avg_distance), 1.0, 1e-9);
    EXPECT_NEAR(dk.inertia / (k * k * d.inertia), 1.0, 1e-9);

    const double n = static_cast<double>(c.size());
    EXPECT_GE(d.inertia * (1 + 1e-12), n * d.avg_distance * d.avg_distance);
    EXPECT_GE(d.inertia, 0.0);
    EXPECT_GE(d.avg_distance, 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, DescriptorProperties, ::testing::Values(1u, 2u, 3u, 4u, 5u));

}  // namespace
}  // namespace flowermatch
