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

#include "fedgraph/fl/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fedgraph/common/error.hpp"

namespace fedgraph {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

double regression_value(EvalMetric metric, std::span<const double> pred,
                        std::span<const double> target) {
  const RegressionMetrics m = regression_metrics(pred, target);
  switch (metric) {
    case EvalMetric::kMae: return m.mae;
    case EvalMetric::kMse: return m.mse;
    default: return m.rmse;
  }
}

bool is_regression_metric(EvalMetric m) {
  return m == EvalMetric::kRmse || m == EvalMetric::kMae || m == EvalMetric::kMse;
}

}  // namespace

void check_metric_for_task(EvalMetric metric, TaskType task) {
  bool ok = false;
  switch (task) {
    case TaskType::kGraphClassification:
      ok = metric == EvalMetric::kAccuracy || metric == EvalMetric::kRocAuc;
      break;
    case TaskType::kNodeClassification:
      ok = metric == EvalMetric::kAccuracy || metric == EvalMetric::kMicroF1;
      break;
    case TaskType::kGraphRegression:
    case TaskType::kLinkRegression:
      ok = is_regression_metric(metric);
      break;
  }
  if (!ok) {
    fail(ErrorCode::kInvalidConfig, "fl.metric: " + std::string(metric_name(metric)) +
                                        " does not apply to task " + std::string(task_name(task)));
  }
}

EvalResult evaluate(const GnnModel& model, const ParamVector& params, const GraphDataset& data,
                    EvalMetric metric) {
  check_metric_for_task(metric, data.task);
  EvalResult out;
  out.metric = std::string(metric_name(metric));
  out.value = kNaN;
  const std::vector<TrainingUnit> units = enumerate_units(data);
  if (units.empty()) return out;

  switch (data.task) {
    case TaskType::kGraphClassification: {
      const std::size_t tasks = data.num_tasks_or_classes;
      if (metric == EvalMetric::kAccuracy) {
        std::size_t correct = 0, seen = 0;
        for (const TrainingUnit& u : units) {
          const auto& y = *data.graphs[u.graph].graph_label();
          if (std::any_of(y.begin(), y.end(), [](double v) { return std::isnan(v); })) continue;
          const DenseMatrix s = model.predict(params, data.graphs[u.graph], u);
          bool hit;
          if (tasks == 1) {
            hit = (s(0, 0) > 0.0) == (y[0] > 0.5);
          } else {
            hit = argmax(s.row(0)) == argmax(y);
          }
          correct += hit ? 1 : 0;
          ++seen;
        }
        if (seen == 0) return out;
        out.value = static_cast<double>(correct) / static_cast<double>(seen);
        out.support = seen;
        return out;
      }
      DenseMatrix scores(units.size(), tasks), labels(units.size(), tasks);
      for (std::size_t i = 0; i < units.size(); ++i) {
        const DenseMatrix s = model.predict(params, data.graphs[units[i].graph], units[i]);
        const auto& y = *data.graphs[units[i].graph].graph_label();
        for (std::size_t t = 0; t < tasks; ++t) {
          scores(i, t) = s(0, t);
          labels(i, t) = y[t];
        }
      }
      try {
        out.value = roc_auc_multitask(scores, labels);
        out.support = units.size();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSingleClass) throw;
      }
      return out;
    }
    case TaskType::kNodeClassification: {
      std::vector<int> pred, truth;
      for (const TrainingUnit& u : units) {
        const Graph& g = data.graphs[u.graph];
        const DenseMatrix logits = model.predict(params, g, u);
        const auto& y = *g.node_labels();
        for (std::size_t v = 0; v < g.num_nodes(); ++v) {
          if (y[v] < 0) continue;
          pred.push_back(static_cast<int>(argmax(logits.row(v))));
          truth.push_back(y[v]);
        }
      }
      if (truth.empty()) return out;
      out.value = micro_f1(pred, truth);
      out.support = truth.size();
      return out;
    }
    case TaskType::kGraphRegression: {
      std::vector<double> pred, target;
      for (const TrainingUnit& u : units) {
        const DenseMatrix s = model.predict(params, data.graphs[u.graph], u);
        const auto& y = *data.graphs[u.graph].graph_label();
        for (std::size_t t = 0; t < y.size(); ++t) {
          if (std::isnan(y[t])) continue;
          pred.push_back(s(0, t));
          target.push_back(y[t]);
        }
      }
      if (target.empty()) return out;
      out.value = regression_value(metric, pred, target);
      out.support = target.size();
      return out;
    }
    case TaskType::kLinkRegression: {
      std::vector<double> pred, target;
      for (const TrainingUnit& u : units) {
        const Graph& g = data.graphs[u.graph];
        pred.push_back(model.predict(params, g, u)(0, 0));
        target.push_back(g.edge_labels()[u.item].value);
      }
      out.value = regression_value(metric, pred, target);
      out.support = target.size();
      return out;
    }
  }
  return out;
}

EvalResult pool_results(std::span<const EvalResult> parts) {
  EvalResult out;
  out.value = kNaN;
  for (const EvalResult& r : parts) {
    if (out.metric.empty()) out.metric = r.metric;
    out.support += r.support;
  }
  if (out.support == 0) return out;
  // Weights s_k / S keep a lone result exact.
  double pooled = 0.0;
  const double total = static_cast<double>(out.support);
  for (const EvalResult& r : parts) {
    if (r.support == 0) continue;
    pooled += static_cast<double>(r.support) / total * r.value;
  }
  out.value = pooled;
  return out;
}

}  // namespace fedgraph
