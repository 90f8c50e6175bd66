// Copyright 2026 The RubbleNav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>

#include <gtest/gtest.h>

#include "rubblenav/argmax_kernel.hpp"
#include "rubblenav/rng.hpp"

using namespace rubblenav;

namespace
{

// Plain loop over the interleaved view; first maximum wins.
LabelMask reference_argmax(const ScoreVolume & v)
{
  LabelMask out(v.width(), v.height(), 0);
  for (std::size_t p = 0; p < v.pixels(); ++p) {
    int best = 0;
    for (int c = 1; c < v.channels(); ++c) {
      if (v.score(c, p) > v.score(best, p)) {
        best = c;
      }
    }
    out[p] = static_cast<ClassId>(best);
  }
  return out;
}

}  // namespace

TEST(Argmax, SingleChannelIsAllZero)
{
  const ScoreVolume v = ScoreVolume::random(7, 5, 1, 3);
  EXPECT_EQ(argmax_sequential(v), LabelMask(7, 5, 0));
  EXPECT_EQ(argmax_parallel(v, 3), LabelMask(7, 5, 0));
}

TEST(Argmax, TiesGoToLowestChannel)
{
  // Two pixels, three channels, plane-major.
  const ScoreVolume v(2, 1, 3, {1.f, 5.f, 4.f, 5.f, 4.f, 0.f});
  const LabelMask m = argmax_sequential(v);
  EXPECT_EQ(m.at(0, 0), 1);   // 1, 4, 4
  EXPECT_EQ(m.at(1, 0), 0);   // 5, 5, 0
  const ScoreVolume flat(1, 1, 4, {2.f, 2.f, 2.f, 2.f});
  EXPECT_EQ(argmax_sequential(flat).at(0, 0), 0);
  EXPECT_EQ(argmax_parallel(flat, 2).at(0, 0), 0);
}

TEST(Argmax, VisitsEveryScoreOnce)
{
  const ScoreVolume v = ScoreVolume::random(480, 360, 10, 1);
  std::uint64_t visits = 0;
  const LabelMask m = argmax_sequential_counted(v, visits);
  EXPECT_EQ(visits, 1728000u);
  EXPECT_EQ(m, argmax_sequential(v));
}

TEST(Argmax, MatchesReferenceAndParallelIsIdentical)
{
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int w = rng.uniform_int(1, 60);
    const int h = rng.uniform_int(1, 40);
    const int c = rng.uniform_int(1, 12);
    const ScoreVolume v = ScoreVolume::random(w, h, c, rng.uniform_int(0, 1 << 20));
    const LabelMask seq = argmax_sequential(v);
    ASSERT_EQ(seq, reference_argmax(v));
    for (int workers = 1; workers <= 8; ++workers) {
      ASSERT_EQ(argmax_parallel(v, workers), seq) << workers;
    }
  }
}

TEST(Argmax, MoreWorkersThanPixels)
{
  const ScoreVolume v = ScoreVolume::random(2, 1, 3, 9);
  EXPECT_EQ(argmax_parallel(v, 8), argmax_sequential(v));
}

TEST(Argmax, InvariantUnderMonotoneTransform)
{
  const ScoreVolume v = ScoreVolume::random(30, 20, 6, 5);
  std::vector<float> t(v.scores().begin(), v.scores().end());
  for (auto & s : t) {
    s = std::exp(s / 4.0f) * 3.0f + 1.0f;
  }
  const ScoreVolume u(30, 20, 6, std::move(t));
  EXPECT_EQ(argmax_sequential(u), argmax_sequential(v));
}

TEST(Argmax, LayoutsAgree)
{
  const ScoreVolume plane = ScoreVolume::random(25, 15, 7, 8);
  const ScoreVolume inter = plane.relayout(ScoreLayout::kInterleaved);
  EXPECT_EQ(inter.layout(), ScoreLayout::kInterleaved);
  EXPECT_EQ(argmax_sequential(inter), argmax_sequential(plane));
  EXPECT_EQ(argmax_parallel(inter, 4), argmax_sequential(plane));
  const ScoreVolume back = inter.relayout(ScoreLayout::kPlaneMajor);
  EXPECT_TRUE(std::equal(
    back.scores().begin(), back.scores().end(), plane.scores().begin(), plane.scores().end()));
}

TEST(Argmax, RejectsBadInput)
{
  EXPECT_THROW(ScoreVolume(2, 2, 1, std::vector<float>(3)), Error);
  EXPECT_THROW(ScoreVolume(0, 2, 1, std::vector<float>()), Error);
  EXPECT_THROW(ScoreVolume(1, 1, 257, std::vector<float>(257)), Error);
  EXPECT_THROW(ScoreVolume(1, 1, 2, {0.f, NAN}), Error);
  const ScoreVolume v = ScoreVolume::random(2, 2, 2, 1);
  EXPECT_THROW(argmax_parallel(v, 0), Error);
  EXPECT_THROW(bench(v, 0, 2), Error);
}

TEST(Bench, SmallVolumeReportsConsistently)
{
  const BenchReport r = bench(ScoreVolume::random(4, 4, 2, 2), 3, 2);
  EXPECT_TRUE(r.outputs_identical);
  EXPECT_EQ(r.reps, 3);
  EXPECT_GT(r.sequential_ms, 0.0);
  EXPECT_GT(r.parallel_ms, 0.0);
  EXPECT_NEAR(r.speedup, r.sequential_ms / r.parallel_ms, 1e-12);
  EXPECT_NE(bench_to_json(r).find("\"outputs_identical\":true"), std::string::npos);
}
