#include <doctest.h>

#include <random>

#include "fusemot/metrics.hpp"

using namespace fusemot;

namespace {

GtAnnotation gt_box(int frame, int id, double left, double top = 0, double size = 50) {
  GtAnnotation g;
  g.frame = frame;
  g.track_id = id;
  g.category = "Car";
  g.left = left;
  g.top = top;
  g.right = left + size;
  g.bottom = top + size;
  return g;
}

TrackOutputRow hyp_box(int frame, int id, double left, double top = 0, double size = 50) {
  TrackOutputRow r;
  r.frame = frame;
  r.id = id;
  r.left = left;
  r.top = top;
  r.right = left + size;
  r.bottom = top + size;
  r.score = 0.9;
  return r;
}

}  // namespace

TEST_CASE("identical hypothesis gives MOTA 1, MOTP 1, IDSW 0") {
  FrameMap<GtAnnotation> gt;
  FrameMap<TrackOutputRow> hyp;
  for (int f = 0; f < 10; ++f) {
    gt[f] = {gt_box(f, 0, 10.0 * f), gt_box(f, 1, 500 + 5.0 * f)};
    hyp[f] = {hyp_box(f, 7, 10.0 * f), hyp_box(f, 9, 500 + 5.0 * f)};
  }
  MetricsReport rep = evaluate_clear(gt, hyp);
  CHECK(rep.mota == doctest::Approx(1.0));
  CHECK(rep.motp == doctest::Approx(1.0));
  CHECK(rep.idsw == 0);
  CHECK(rep.fp == 0);
  CHECK(rep.fn == 0);
  CHECK(rep.gt == 20);
}

TEST_CASE("empty hypothesis gives MOTA 0") {
  FrameMap<GtAnnotation> gt;
  for (int f = 0; f < 5; ++f) gt[f] = {gt_box(f, 0, 100)};
  MetricsReport rep = evaluate_clear(gt, {});
  CHECK(rep.fn == 5);
  CHECK(rep.fp == 0);
  CHECK(rep.mota == doctest::Approx(0.0));
}

TEST_CASE("hand-enumerated id flip: 3 frames, one switch") {
  FrameMap<GtAnnotation> gt;
  FrameMap<TrackOutputRow> hyp;
  for (int f = 0; f < 3; ++f) gt[f] = {gt_box(f, 0, 100)};
  hyp[0] = {hyp_box(0, 1, 100)};
  hyp[1] = {hyp_box(1, 1, 100)};
  hyp[2] = {hyp_box(2, 2, 100)};  // flip
  MetricsReport rep = evaluate_clear(gt, hyp);
  CHECK(rep.idsw == 1);
  CHECK(rep.fp == 0);
  CHECK(rep.fn == 0);
  CHECK(rep.mota == doctest::Approx(1.0 - 1.0 / 3.0));
}

TEST_CASE("MOTA identity holds on a noisy random evaluation") {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  FrameMap<GtAnnotation> gt;
  FrameMap<TrackOutputRow> hyp;
  for (int f = 0; f < 60; ++f) {
    for (int id = 0; id < 4; ++id) {
      gt[f].push_back(gt_box(f, id, 150.0 * id + f));
      if (uni(rng) < 0.8)
        hyp[f].push_back(hyp_box(f, (uni(rng) < 0.05) ? 100 + id : id, 150.0 * id + f + 5 * uni(rng)));
      if (uni(rng) < 0.1) hyp[f].push_back(hyp_box(f, 50 + f, 900.0));
    }
  }
  MetricsReport rep = evaluate_clear(gt, hyp);
  CHECK(rep.mota ==
        doctest::Approx(1.0 - double(rep.fn + rep.fp + rep.idsw) / double(rep.gt)).epsilon(1e-12));
  CHECK(rep.fp >= 0);
  CHECK(rep.fn >= 0);
}

TEST_CASE("evaluation is invariant under hypothesis id relabeling") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  FrameMap<GtAnnotation> gt;
  FrameMap<TrackOutputRow> hyp;
  for (int f = 0; f < 40; ++f)
    for (int id = 0; id < 3; ++id) {
      gt[f].push_back(gt_box(f, id, 200.0 * id + 2 * f));
      if (uni(rng) < 0.9) hyp[f].push_back(hyp_box(f, id + (f > 20 && id == 1 ? 10 : 0), 200.0 * id + 2 * f));
    }
  MetricsReport a = evaluate_clear(gt, hyp);
  FrameMap<TrackOutputRow> renamed = hyp;
  for (auto& [f, rows] : renamed)
    for (auto& r : rows) r.id = 7777 - r.id * 13;  // bijective rename
  MetricsReport b = evaluate_clear(gt, renamed);
  CHECK(a.mota == doctest::Approx(b.mota));
  CHECK(a.motp == doctest::Approx(b.motp));
  CHECK(a.idsw == b.idsw);
  CHECK(a.fp == b.fp);
  CHECK(a.fn == b.fn);
}

TEST_CASE("correspondence persistence prefers the previous pairing") {
  // Two hypotheses both overlap the gt; the one matched last frame keeps it
  // even when the other has slightly higher IoU now.
  FrameMap<GtAnnotation> gt;
  FrameMap<TrackOutputRow> hyp;
  gt[0] = {gt_box(0, 0, 100)};
  hyp[0] = {hyp_box(0, 1, 100)};
  gt[1] = {gt_box(1, 0, 100)};
  hyp[1] = {hyp_box(1, 1, 110), hyp_box(1, 2, 105)};
  MetricsReport rep = evaluate_clear(gt, hyp);
  CHECK(rep.idsw == 0);
  CHECK(rep.fp == 1);  // the unmatched extra hypothesis
}

TEST_CASE("sum_reports recomputes MOTA over pooled counts") {
  FrameMap<GtAnnotation> gt1, gt2;
  FrameMap<TrackOutputRow> hyp1;
  for (int f = 0; f < 4; ++f) {
    gt1[f] = {gt_box(f, 0, 10)};
    gt2[f] = {gt_box(f, 0, 10)};
    hyp1[f] = {hyp_box(f, 0, 10)};
  }
  MetricsReport a = evaluate_clear(gt1, hyp1);
  MetricsReport b = evaluate_clear(gt2, {});
  MetricsReport total = sum_reports({a, b});
  CHECK(total.gt == 8);
  CHECK(total.fn == 4);
  CHECK(total.mota == doctest::Approx(0.5));
}
