#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bevmap/grid.hpp"
#include "bevmap/labels.hpp"

namespace bevmap {

struct ClassCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
};

struct ClassMetrics {
  int channel = 0;
  ClassCounts counts;
  std::optional<double> iou;       // TP/(TP+FP+FN); empty when that sum is 0
  std::optional<double> accuracy;  // recall TP/(TP+FN); empty when gt lacks the class
};

struct EvalReport {
  std::vector<ClassMetrics> per_class;
  std::optional<double> miou;  // mean IoU over classes where IoU is defined
  std::vector<int> evaluated_classes;
  std::int64_t cells_compared = 0;  // cells where gt is known
};

// Per-class confusion counts over the cells where gt is known. A pred-unknown
// cell counts as "not this class" for every class.
ClassCounts count_class(const LabelRaster& pred, const LabelRaster& gt, int channel);

std::optional<double> compute_iou(const LabelRaster& pred, const LabelRaster& gt, int channel);
std::optional<double> compute_accuracy(const LabelRaster& pred, const LabelRaster& gt,
                                       int channel);

EvalReport evaluate(const LabelRaster& pred, const LabelRaster& gt,
                    const std::vector<int>& classes);

nlohmann::json report_to_json(const EvalReport& report, const LabelSet& labels);
std::string report_to_table(const EvalReport& report, const LabelSet& labels);

}  // namespace bevmap
