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

#include "fedgraph/io/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "fedgraph/common/log.hpp"

#include "fedgraph/common/error.hpp"
#include "json.hpp"

namespace fedgraph {
namespace {

using Json = nlohmann::ordered_json;

Json matrix_json(const DenseMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

DenseMatrix matrix_from(const Json& rows, std::size_t expected_rows, std::size_t cols,
                        const std::string& what) {
  require(rows.is_array() && rows.size() == expected_rows, ErrorCode::kSchemaViolation,
          what + ": expected " + std::to_string(expected_rows) + " rows");
  DenseMatrix m(expected_rows, cols);
  for (std::size_t r = 0; r < expected_rows; ++r) {
    const Json& row = rows[r];
    require(row.is_array() && row.size() == cols, ErrorCode::kSchemaViolation,
            what + ": row " + std::to_string(r) + " must have " + std::to_string(cols) +
                " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      require(row[c].is_number(), ErrorCode::kSchemaViolation, what + ": non-numeric entry");
      const double v = row[c].get<double>();
      require(std::isfinite(v), ErrorCode::kSchemaViolation, what + ": non-finite value");
      m(r, c) = v;
    }
  }
  return m;
}

Json graph_json(const Graph& g) {
  Json j;
  j["num_nodes"] = g.num_nodes();
  Json edges = Json::array();
  std::vector<std::size_t> edge_rows;
  for (std::size_t u = 0; u < g.num_nodes(); ++u) {
    auto nbrs = g.neighbors(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] <= u) continue;
      edges.push_back(Json::array({u, nbrs[i]}));
      edge_rows.push_back(g.row_offsets()[u] + i);
    }
  }
  j["edges"] = std::move(edges);
  j["node_features"] = matrix_json(g.node_features());
  if (g.edge_features()) {
    const DenseMatrix& ef = *g.edge_features();
    DenseMatrix once(edge_rows.size(), ef.cols());
    for (std::size_t k = 0; k < edge_rows.size(); ++k) {
      auto from = ef.row(edge_rows[k]);
      std::copy(from.begin(), from.end(), once.row(k).begin());
    }
    j["edge_features"] = matrix_json(once);
  }
  if (g.node_labels()) j["node_labels"] = *g.node_labels();
  if (g.graph_label()) {
    Json y = Json::array();
    for (double v : *g.graph_label()) {
      if (std::isnan(v)) {
        y.push_back(nullptr);
      } else {
        y.push_back(v);
      }
    }
    j["graph_label"] = std::move(y);
  }
  if (!g.edge_labels().empty()) {
    Json labels = Json::array();
    for (const EdgeLabel& l : g.edge_labels()) labels.push_back(Json::array({l.src, l.dst, l.value}));
    j["edge_labels"] = std::move(labels);
  }
  if (g.category()) j["category"] = *g.category();
  if (g.node_categories()) j["node_categories"] = *g.node_categories();
  return j;
}

Graph graph_from(const Json& j, const GraphDataset& header, std::size_t index) {
  const std::string where = "graphs[" + std::to_string(index) + "]";
  require(j.is_object(), ErrorCode::kSchemaViolation, where + " must be an object");
  GraphInput in;
  in.num_nodes = j.at("num_nodes").get<std::size_t>();
  for (const Json& e : j.at("edges")) {
    require(e.is_array() && e.size() == 2, ErrorCode::kSchemaViolation,
            where + ".edges entries must be [u, v]");
    in.edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  in.node_features =
      matrix_from(j.at("node_features"), in.num_nodes, header.node_feature_dim, where + ".node_features");
  if (j.contains("edge_features")) {
    in.edge_features = matrix_from(j.at("edge_features"), in.edges.size(), header.edge_feature_dim,
                                   where + ".edge_features");
  }
  if (j.contains("node_labels")) in.node_labels = j.at("node_labels").get<std::vector<int>>();
  if (j.contains("graph_label")) {
    std::vector<double> y;
    for (const Json& v : j.at("graph_label")) {
      y.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    }
    in.graph_label = std::move(y);
  }
  if (j.contains("edge_labels")) {
    for (const Json& l : j.at("edge_labels")) {
      require(l.is_array() && l.size() == 3, ErrorCode::kSchemaViolation,
              where + ".edge_labels entries must be [src, dst, value]");
      in.edge_labels.push_back({l[0].get<std::size_t>(), l[1].get<std::size_t>(), l[2].get<double>()});
    }
  }
  if (j.contains("category")) in.category = j.at("category").get<int>();
  if (j.contains("node_categories")) {
    in.node_categories = j.at("node_categories").get<std::vector<int>>();
  }
  try {
    return build_graph(std::move(in));
  } catch (const Error& e) {
    fail(ErrorCode::kSchemaViolation, where + ": " + e.what());
  }
}

// True when the text parses once bare NaN / Infinity tokens (as emitted by
// some JSON writers) are replaced by null.
bool has_nonfinite_literal(std::string_view text) {
  std::string patched;
  patched.reserve(text.size());
  bool in_string = false;
  bool found = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      patched.push_back(c);
      if (c == '\\' && i + 1 < text.size()) {
        patched.push_back(text[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') in_string = true;
    bool replaced = false;
    for (std::string_view token : {"-Infinity", "Infinity", "NaN"}) {
      if (text.substr(i, token.size()) == token) {
        patched += "null";
        i += token.size() - 1;
        found = replaced = true;
        break;
      }
    }
    if (!replaced) patched.push_back(c);
  }
  return found && Json::accept(patched);
}

}  // namespace

std::string dataset_to_json(const GraphDataset& dataset) {
  Json j;
  j["format_version"] = 1;
  j["task"] = std::string(task_name(dataset.task));
  j["num_tasks_or_classes"] = dataset.num_tasks_or_classes;
  j["feature_dims"] = Json{{"node", dataset.node_feature_dim}, {"edge", dataset.edge_feature_dim}};
  if (!dataset.class_names.empty()) j["class_names"] = dataset.class_names;
  Json graphs = Json::array();
  for (const Graph& g : dataset.graphs) graphs.push_back(graph_json(g));
  j["graphs"] = std::move(graphs);
  return j.dump() + "\n";
}

GraphDataset dataset_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::out_of_range& e) {
    // Numbers too large for a double would become Inf.
    fail(ErrorCode::kSchemaViolation, std::string("dataset: non-finite value: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    if (has_nonfinite_literal(text)) {
      fail(ErrorCode::kSchemaViolation, "dataset: NaN or Infinity literal");
    }
    fail(ErrorCode::kParseError, std::string("dataset: ") + e.what());
  }
  try {
    require(j.is_object(), ErrorCode::kSchemaViolation, "dataset must be a JSON object");
    require(j.value("format_version", 0) == 1, ErrorCode::kSchemaViolation,
            "format_version must be 1");
    GraphDataset d;
    try {
      d.task = parse_task(j.at("task").get<std::string>());
    } catch (const Error& e) {
      fail(ErrorCode::kSchemaViolation, e.what());
    }
    d.num_tasks_or_classes = j.at("num_tasks_or_classes").get<std::size_t>();
    const Json& dims = j.at("feature_dims");
    d.node_feature_dim = dims.at("node").get<std::size_t>();
    d.edge_feature_dim = dims.value("edge", std::size_t{0});
    if (j.contains("class_names")) d.class_names = j.at("class_names").get<std::vector<std::string>>();
    const Json& graphs = j.at("graphs");
    require(graphs.is_array(), ErrorCode::kSchemaViolation, "graphs must be an array");
    for (std::size_t i = 0; i < graphs.size(); ++i) d.graphs.push_back(graph_from(graphs[i], d, i));
    validate_dataset(d);
    return d;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSchemaViolation, std::string("dataset: ") + e.what());
  }
}

void save_dataset(const GraphDataset& dataset, const std::filesystem::path& path) {
  write_text_file(path, dataset_to_json(dataset));
}

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "json") return DatasetFormat::kJson;
  if (name == "planetoid") return DatasetFormat::kPlanetoid;
  fail(ErrorCode::kInvalidConfig, "data.format: unknown value '" + std::string(name) + "'");
}

LoadResult parse_planetoid(std::string_view content, std::string_view cites) {
  std::unordered_map<std::string, std::size_t> id_to_node;
  std::unordered_map<std::string, int> label_to_class;
  std::vector<std::string> class_names;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<std::size_t> original;

  std::istringstream lines{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    const std::string where = "content line " + std::to_string(line_no);
    require(tokens.size() >= 2, ErrorCode::kParseError, where + ": need an id and a label");
    const std::size_t f = tokens.size() - 2;
    if (rows.empty()) width = f;
    require(f == width, ErrorCode::kSchemaViolation, where + ": feature count differs");
    std::vector<double> row(f);
    for (std::size_t c = 0; c < f; ++c) {
      const std::string& tok = tokens[c + 1];
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        fail(ErrorCode::kParseError, where + ": bad number '" + tok + "'");
      }
      require(used == tok.size(), ErrorCode::kParseError, where + ": bad number '" + tok + "'");
      require(std::isfinite(v), ErrorCode::kSchemaViolation, where + ": non-finite feature");
      row[c] = v;
    }
    require(id_to_node.emplace(tokens[0], rows.size()).second, ErrorCode::kSchemaViolation,
            where + ": duplicate id " + tokens[0]);
    const std::string& label = tokens.back();
    auto [it, inserted] = label_to_class.emplace(label, static_cast<int>(class_names.size()));
    if (inserted) class_names.push_back(label);
    labels.push_back(it->second);
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorCode::kSchemaViolation, "content file has no rows");

  GraphInput in;
  in.num_nodes = rows.size();
  in.node_features = DenseMatrix(rows.size(), width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), in.node_features.row(r).begin());
  }
  in.node_labels = labels;

  LoadResult out;
  std::istringstream cite_lines{std::string(cites)};
  line_no = 0;
  while (std::getline(cite_lines, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    require(static_cast<bool>(fields >> b) && !(fields >> extra), ErrorCode::kParseError,
            "cites line " + std::to_string(line_no) + ": expected two ids");
    auto ia = id_to_node.find(a);
    auto ib = id_to_node.find(b);
    if (ia == id_to_node.end() || ib == id_to_node.end()) {
      ++out.dropped_edges;
      continue;
    }
    in.edges.emplace_back(ia->second, ib->second);
  }
  if (out.dropped_edges > 0) {
    logger().warn("DanglingEdge: dropped {} cites rows naming unknown ids", out.dropped_edges);
  }
  out.dataset.task = TaskType::kNodeClassification;
  out.dataset.num_tasks_or_classes = class_names.size();
  out.dataset.node_feature_dim = width;
  out.dataset.class_names = std::move(class_names);
  out.dataset.graphs.push_back(build_graph(std::move(in)));
  validate_dataset(out.dataset);
  return out;
}

LoadResult load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  if (format == DatasetFormat::kJson) return {dataset_from_json(read_text_file(path)), 0};
  std::filesystem::path content, cites;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.path().extension() == ".content") content = entry.path();
      if (entry.path().extension() == ".cites") cites = entry.path();
    }
  } else {
    content = path.string() + ".content";
    cites = path.string() + ".cites";
  }
  require(!content.empty() && !cites.empty(), ErrorCode::kParseError,
          "no .content/.cites pair under " + path.string());
  return parse_planetoid(read_text_file(content), read_text_file(cites));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::kInvalidParams, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace fedgraph
