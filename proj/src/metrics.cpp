#include "fusemot/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "fusemot/association.hpp"
#include "fusemot/geometry.hpp"

namespace fusemot {

void MetricsReport::finalize() {
  mota = gt > 0 ? 1.0 - static_cast<double>(fn + fp + idsw) / static_cast<double>(gt) : 0.0;
  motp = matches > 0 ? iou_sum / static_cast<double>(matches) : 0.0;
}

std::string MetricsReport::to_text() const {
  std::ostringstream os;
  os << "MOTA " << mota << "  MOTP " << motp << "  FP " << fp << "  FN " << fn << "  IDSW "
     << idsw << "  GT " << gt << '\n';
  return os.str();
}

std::string MetricsReport::to_keyvalue() const {
  std::ostringstream os;
  os << "mota = " << mota << "\nmotp = " << motp << "\nfp = " << fp << "\nfn = " << fn
     << "\nidsw = " << idsw << "\ngt = " << gt << "\nmatches = " << matches << '\n';
  return os.str();
}

MetricsReport evaluate_clear(const FrameMap<GtAnnotation>& gt, const FrameMap<TrackOutputRow>& hyp,
                             double iou_gate) {
  MetricsReport rep;
  std::set<int> frames;
  for (const auto& [f, _] : gt) frames.insert(f);
  for (const auto& [f, _] : hyp) frames.insert(f);

  std::map<int, int> last_match;  // gt id -> hyp id it last matched

  static const std::vector<GtAnnotation> kNoGt;
  static const std::vector<TrackOutputRow> kNoHyp;
  for (int frame : frames) {
    auto git = gt.find(frame);
    auto hit = hyp.find(frame);
    const auto& gts = git != gt.end() ? git->second : kNoGt;
    const auto& hyps = hit != hyp.end() ? hit->second : kNoHyp;

    FrameMetrics fm;
    fm.frame = frame;
    rep.gt += static_cast<long long>(gts.size());

    auto iou_of = [&](const GtAnnotation& g, const TrackOutputRow& h) {
      return iou_2d(Box2D{g.left, g.top, g.right, g.bottom},
                    Box2D{h.left, h.top, h.right, h.bottom});
    };

    std::vector<char> gt_done(gts.size(), 0), hyp_done(hyps.size(), 0);

    // Correspondence persistence: keep last frame's pairing when still valid.
    for (size_t gi = 0; gi < gts.size(); ++gi) {
      auto prev = last_match.find(gts[gi].track_id);
      if (prev == last_match.end()) continue;
      for (size_t hi = 0; hi < hyps.size(); ++hi) {
        if (hyp_done[hi] || hyps[hi].id != prev->second) continue;
        double iou = iou_of(gts[gi], hyps[hi]);
        if (iou >= iou_gate) {
          gt_done[gi] = 1;
          hyp_done[hi] = 1;
          ++fm.matches;
          fm.iou_sum += iou;
        }
        break;
      }
    }

    // Remaining pairs by max-weight assignment on IoU.
    std::vector<int> gidx, hidx;
    for (size_t gi = 0; gi < gts.size(); ++gi)
      if (!gt_done[gi]) gidx.push_back(static_cast<int>(gi));
    for (size_t hi = 0; hi < hyps.size(); ++hi)
      if (!hyp_done[hi]) hidx.push_back(static_cast<int>(hi));
    std::vector<std::vector<double>> weights(gidx.size(), std::vector<double>(hidx.size(), 0.0));
    for (size_t r = 0; r < gidx.size(); ++r)
      for (size_t c = 0; c < hidx.size(); ++c)
        weights[r][c] = iou_of(gts[gidx[r]], hyps[hidx[c]]);
    AssignmentResult assign = solve_assignment(weights, iou_gate);
    for (auto [r, c] : assign.matches) {
      int gi = gidx[r], hi = hidx[c];
      gt_done[gi] = 1;
      hyp_done[hi] = 1;
      ++fm.matches;
      fm.iou_sum += weights[r][c];
      auto prev = last_match.find(gts[gi].track_id);
      if (prev != last_match.end() && prev->second != hyps[hi].id) ++fm.idsw;
      last_match[gts[gi].track_id] = hyps[hi].id;
    }

    fm.fn = static_cast<int>(std::count(gt_done.begin(), gt_done.end(), 0));
    fm.fp = static_cast<int>(std::count(hyp_done.begin(), hyp_done.end(), 0));
    rep.fp += fm.fp;
    rep.fn += fm.fn;
    rep.idsw += fm.idsw;
    rep.matches += fm.matches;
    rep.iou_sum += fm.iou_sum;
    rep.per_frame.push_back(fm);
  }
  rep.finalize();
  return rep;
}

MetricsReport sum_reports(const std::vector<MetricsReport>& reports) {
  MetricsReport total;
  for (const auto& r : reports) {
    total.fp += r.fp;
    total.fn += r.fn;
    total.idsw += r.idsw;
    total.gt += r.gt;
    total.matches += r.matches;
    total.iou_sum += r.iou_sum;
  }
  total.finalize();
  return total;
}

}  // namespace fusemot
