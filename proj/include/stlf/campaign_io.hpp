// ============================================================================
// stlf/campaign_io.hpp — serialization of campaign artifacts
// ============================================================================
//
// Campaign results are written as JSON-lines (one evaluation per line) plus
// a JSON summary record; heatmaps as a CSV matrix with a JSON axis sidecar.
// All numbers round-trip bit-exactly.
//
// ============================================================================

#pragma once

#include <string>

#include "stlf/monitor.hpp"
#include "stlf/optimizer.hpp"

namespace stlf {

/// One evaluation per line:
///   {"index": 3, "point": {"xi[0]": -0.25, "mu": "2"}, "robustness": 1.5, "trace_id": 3}
void write_campaign_jsonl(const CampaignResult& result, const SearchSpace& space,
                          const std::string& path);

void write_campaign_summary(const CampaignResult& result, const SearchSpace& space,
                            const std::string& method, std::uint64_t seed,
                            const std::string& path);

/// Matrix CSV (rows follow the first axis) plus "<path>.axes.json" metadata.
void write_heatmap_csv(const HeatmapResult& hm, const std::string& csv_path,
                       const std::string& axes_path);

std::string verdict_to_json(const MonitorVerdict& verdict);

}  // namespace stlf
