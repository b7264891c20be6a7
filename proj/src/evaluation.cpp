#include "bevmap/evaluation.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bevmap/errors.hpp"

namespace bevmap {

namespace {

void check_shapes(const LabelRaster& pred, const LabelRaster& gt) {
  if (pred.width != gt.width || pred.height != gt.height) {
    throw ConfigError("prediction and ground truth rasters differ in size (" +
                      std::to_string(pred.width) + "x" + std::to_string(pred.height) + " vs " +
                      std::to_string(gt.width) + "x" + std::to_string(gt.height) + ")");
  }
}

}  // namespace

ClassCounts count_class(const LabelRaster& pred, const LabelRaster& gt, int channel) {
  check_shapes(pred, gt);
  ClassCounts counts;
  const std::uint8_t ch = static_cast<std::uint8_t>(channel);
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    const std::uint8_t g = gt.labels[i];
    if (g == LabelRaster::kUnknown) continue;
    const std::uint8_t p = pred.labels[i];
    const bool gt_pos = g == ch;
    const bool pred_pos = p == ch;  // unknown pred is never positive
    if (gt_pos && pred_pos) ++counts.tp;
    else if (!gt_pos && pred_pos) ++counts.fp;
    else if (gt_pos && !pred_pos) ++counts.fn;
    else ++counts.tn;
  }
  return counts;
}

std::optional<double> compute_iou(const LabelRaster& pred, const LabelRaster& gt, int channel) {
  const ClassCounts c = count_class(pred, gt, channel);
  const std::int64_t denom = c.tp + c.fp + c.fn;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

std::optional<double> compute_accuracy(const LabelRaster& pred, const LabelRaster& gt,
                                       int channel) {
  const ClassCounts c = count_class(pred, gt, channel);
  const std::int64_t denom = c.tp + c.fn;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

EvalReport evaluate(const LabelRaster& pred, const LabelRaster& gt,
                    const std::vector<int>& classes) {
  check_shapes(pred, gt);
  EvalReport report;
  report.evaluated_classes = classes;
  for (std::uint8_t g : gt.labels) {
    if (g != LabelRaster::kUnknown) ++report.cells_compared;
  }
  double iou_sum = 0.0;
  int iou_count = 0;
  for (int channel : classes) {
    ClassMetrics m;
    m.channel = channel;
    m.counts = count_class(pred, gt, channel);
    const std::int64_t iou_denom = m.counts.tp + m.counts.fp + m.counts.fn;
    if (iou_denom > 0) {
      m.iou = static_cast<double>(m.counts.tp) / static_cast<double>(iou_denom);
      iou_sum += *m.iou;
      ++iou_count;
    }
    const std::int64_t acc_denom = m.counts.tp + m.counts.fn;
    if (acc_denom > 0) {
      m.accuracy = static_cast<double>(m.counts.tp) / static_cast<double>(acc_denom);
    }
    report.per_class.push_back(m);
  }
  if (iou_count > 0) report.miou = iou_sum / iou_count;
  return report;
}

nlohmann::json report_to_json(const EvalReport& report, const LabelSet& labels) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const ClassMetrics& m : report.per_class) {
    nlohmann::json j{
        {"channel", m.channel},
        {"name", labels.channel_name(m.channel)},
        {"tp", m.counts.tp},
        {"fp", m.counts.fp},
        {"fn", m.counts.fn},
        {"tn", m.counts.tn},
    };
    j["iou"] = m.iou ? nlohmann::json(*m.iou) : nlohmann::json();
    j["accuracy"] = m.accuracy ? nlohmann::json(*m.accuracy) : nlohmann::json();
    per_class.push_back(j);
  }
  nlohmann::json out{
      {"per_class", per_class},
      {"cells_compared", report.cells_compared},
  };
  out["miou"] = report.miou ? nlohmann::json(*report.miou) : nlohmann::json();
  return out;
}

std::string report_to_table(const EvalReport& report, const LabelSet& labels) {
  std::ostringstream os;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%-12s %8s %10s %10s %10s %10s\n", "class", "IoU",
                "accuracy", "TP", "FP", "FN");
  os << buf;
  auto fmt = [](const std::optional<double>& v) {
    char cell[16];
    if (v) {
      std::snprintf(cell, sizeof(cell), "%8.3f", *v);
    } else {
      std::snprintf(cell, sizeof(cell), "%8s", "n/a");
    }
    return std::string(cell);
  };
  for (const ClassMetrics& m : report.per_class) {
    std::snprintf(buf, sizeof(buf), "%-12s %s %s   %10lld %10lld %10lld\n",
                  labels.channel_name(m.channel).c_str(), fmt(m.iou).c_str(),
                  fmt(m.accuracy).c_str(), static_cast<long long>(m.counts.tp),
                  static_cast<long long>(m.counts.fp), static_cast<long long>(m.counts.fn));
    os << buf;
  }
  if (report.miou) {
    std::snprintf(buf, sizeof(buf), "%-12s %8.3f\n", "mIoU", *report.miou);
  } else {
    std::snprintf(buf, sizeof(buf), "%-12s %8s\n", "mIoU", "n/a");
  }
  os << buf;
  std::snprintf(buf, sizeof(buf), "cells compared: %lld\n",
                static_cast<long long>(report.cells_compared));
  os << buf;
  return os.str();
}

}  // namespace bevmap
