/*
 * Copyright 2026 The FedGraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fedgraph/fl/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fedgraph {
namespace {

using nlohmann::ordered_json;

ordered_json maybe(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void finalize_report(TrainingReport& report, bool higher_better) {
  report.final_val_metric.reset();
  report.final_test_metric.reset();
  report.best_val_round.reset();
  report.best_val_test_metric.reset();
  std::optional<double> best;
  for (const RoundRecord& r : report.rounds) {
    if (!r.test_metric && !r.val_metric) continue;
    report.final_val_metric = r.val_metric;
    report.final_test_metric = r.test_metric;
    if (r.val_metric && std::isfinite(*r.val_metric)) {
      const double v = *r.val_metric;
      if (!best || (higher_better ? v > *best : v < *best)) {
        best = v;
        report.best_val_round = r.round;
        report.best_val_test_metric = r.test_metric;
      }
    }
  }
}

std::string report_to_json(const TrainingReport& report, const ordered_json* config) {
  ordered_json j;
  j["mode"] = report.mode;
  j["secure"] = report.secure;
  if (config != nullptr) j["config"] = *config;
  j["metric"] = report.metric;
  j["seed"] = report.seed;
  j["param_count"] = report.param_count;
  ordered_json rounds = ordered_json::array();
  for (const RoundRecord& r : report.rounds) {
    ordered_json row;
    row["round"] = r.round;
    row["participants"] = r.participants;
    row["mean_train_loss"] = maybe(r.mean_train_loss);
    if (r.val_metric || r.test_metric) {
      row["val_metric"] = maybe(r.val_metric);
      row["test_metric"] = maybe(r.test_metric);
    }
    rounds.push_back(std::move(row));
  }
  j["per_round"] = std::move(rounds);
  j["final_val_metric"] = maybe(report.final_val_metric);
  j["final_test_metric"] = maybe(report.final_test_metric);
  j["best_val_round"] = report.best_val_round ? ordered_json(*report.best_val_round) : nullptr;
  j["best_val_test_metric"] = maybe(report.best_val_test_metric);
  return j.dump(2) + "\n";
}

std::string report_to_csv(const TrainingReport& report) {
  std::ostringstream out;
  out << "round,participants,mean_train_loss,val_metric,test_metric\n";
  for (const RoundRecord& r : report.rounds) {
    out << r.round << ',' << r.participants << ',' << format_double(r.mean_train_loss) << ','
        << (r.val_metric ? format_double(*r.val_metric) : "") << ','
        << (r.test_metric ? format_double(*r.test_metric) : "") << '\n';
  }
  return out.str();
}

std::string timing_to_json(const TrainingReport& report) {
  ordered_json j;
  j["per_round_wall_ms"] = report.round_wall_ms;
  j["total_wall_ms"] = report.total_wall_ms;
  return j.dump(2) + "\n";
}

}  // namespace fedgraph
