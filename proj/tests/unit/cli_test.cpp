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

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fedgraph/cli/commands.hpp"
#include "fedgraph/cli/config.hpp"
#include "fedgraph/comm/message.hpp"
#include "fedgraph/common/error.hpp"
#include "fedgraph/io/dataset_io.hpp"
#include "fedgraph/io/synthetic.hpp"

namespace fedgraph {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = fs::path(FEDGRAPH_TEST_DATA_DIR) / "fixtures" / "configs";

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() /
                     ("fedgraph_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

CliRun cli(const std::string& args, const fs::path& cwd) {
  const fs::path out = cwd / ".stdout", err = cwd / ".stderr";
  const std::string cmd = "cd '" + cwd.string() + "' && '" FEDGRAPH_CLI "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

ordered_json valid_doc() { return read_json_file(kFixtures / "valid_motif.json"); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

// ---------------------------------------------------------------------------
// Config parsing

TEST(RunConfig, ValidFixtureParsesWithDefaults) {
  const RunConfig c = parse_run_config(valid_doc());
  EXPECT_EQ(c.fl.num_clients, 4u);
  EXPECT_EQ(c.partition.num_clients, 4u);
  EXPECT_EQ(c.model.hidden_dim, 8u);
  EXPECT_EQ(c.model.attention_heads, 2u);
  EXPECT_DOUBLE_EQ(c.model.dropout, 0.3);
  EXPECT_EQ(c.fl.optimizer.kind, OptimizerKind::kAdam);
  EXPECT_FALSE(c.secure_enabled);
  EXPECT_EQ(c.data.synthetic->motif.num_graphs, 40u);
}

TEST(RunConfig, NormalizedFormRoundTrips) {
  ordered_json doc = valid_doc();
  doc["secure"] = {{"threshold", 2}};
  doc["fl"]["dropouts"] = {{{"round", 1}, {"client", 2}, {"stage", "before_aggregate_share"}}};
  doc["fl"]["metric"] = "accuracy";
  const ordered_json once = run_config_to_json(parse_run_config(doc));
  const ordered_json twice = run_config_to_json(parse_run_config(once));
  EXPECT_EQ(once.dump(), twice.dump());
  EXPECT_TRUE(once["secure"]["enabled"].get<bool>());
}

TEST(RunConfig, EchoOmitsOutputDir) {
  const ordered_json echo = run_config_to_json(parse_run_config(valid_doc()), false);
  EXPECT_FALSE(echo.contains("output_dir"));
}

struct BadFixture {
  const char* file;
  const char* key;
};

// Every inconsistent fixture is rejected before training, naming its key.
TEST(RunConfig, RejectsEveryBadFixtureNamingTheKey) {
  const std::vector<BadFixture> cases = {
      {"bad_unknown_key.json", "fl.learnig_rate"},
      {"bad_partition_clients_mismatch.json", "partition.num_clients"},
      {"bad_task_head.json", "model.task"},
      {"bad_metric_for_task.json", "fl.metric"},
      {"bad_threshold.json", "secure.threshold"},
      {"bad_clients_per_round.json", "fl.clients_per_round"},
      {"bad_data_both.json", "data."},
      {"bad_data_missing.json", "data"},
      {"bad_alpha.json", "partition.alpha"},
      {"bad_split_sum.json", "partition.split"},
      {"bad_dropout_round.json", "fl.dropouts.round"},
      {"bad_wrong_type.json", "fl.rounds"},
      {"bad_egos_on_graph_task.json", "data.egos"},
      {"bad_model_kind.json", "model.model"},
      {"bad_gat_heads.json", "model.hidden_dim"},
      {"bad_optimizer_kind.json", "fl.optimizer.kind"},
      {"bad_too_many_clients.json", "fl.num_clients"},
      {"bad_scale_bits.json", "secure.scale_bits"},
      {"bad_metadata_without_categories.json", "partition.scheme"},
      {"bad_output_dir_empty.json", "output_dir"},
      {"bad_dropout_stage.json", "fl.dropouts.0.stage"},
  };
  std::set<std::string> covered;
  for (const BadFixture& f : cases) {
    covered.insert(f.file);
    SCOPED_TRACE(f.file);
    try {
      const RunConfig c = parse_run_config(read_json_file(kFixtures / f.file));
      check_run_consistency(c, load_run_data(c));
      ADD_FAILURE() << "accepted";
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(f.key), std::string::npos) << e.what();
      EXPECT_EQ(exit_code_for(e.code()), kExitInvalid);
    }
  }
  for (const auto& entry : fs::directory_iterator(kFixtures)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("bad_", 0) == 0 && name != "bad_malformed.json") {
      EXPECT_TRUE(covered.count(name)) << name << " has no expectation";
    }
  }
}

TEST(RunConfig, MalformedJsonIsParseError) {
  try {
    read_json_file(kFixtures / "bad_malformed.json");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
}

TEST(RunConfig, SetValueCreatesOrRequiresPath) {
  ordered_json doc = valid_doc();
  set_config_value(doc, "fl.rounds", 7);
  EXPECT_EQ(doc["fl"]["rounds"], 7);
  EXPECT_THROW(set_config_value(doc, "fl.nope", 1), Error);
  set_config_value(doc, "secure.threshold", 2, true);
  EXPECT_EQ(parse_run_config(doc).secure.threshold, 2u);
  EXPECT_TRUE(has_config_path(doc, "secure.threshold"));
  EXPECT_FALSE(has_config_path(doc, "secure.nope"));
}

TEST(RunConfig, AssignmentParsesJsonOrString) {
  EXPECT_EQ(parse_assignment("fl.rounds=3").second, 3);
  EXPECT_EQ(parse_assignment("fl.server=fedopt").second, "fedopt");
  EXPECT_EQ(parse_assignment("fl.dropouts=[]").second, ordered_json::array());
  EXPECT_THROW(parse_assignment("novalue"), Error);
}

TEST(ExitCodes, Contract) {
  EXPECT_EQ(exit_code_for(ErrorCode::kInsufficientSurvivors), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::kTransportFailure), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::kTimeout), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::kInvalidConfig), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::kInvalidAlpha), 2);
}

// ---------------------------------------------------------------------------
// gen-data

TEST(GenData, MotifFileIsDeterministic) {
  const fs::path dir = scratch("gen");
  const CliRun a = cli("gen-data --kind motif --graphs 200 --seed 7 --out a.json", dir);
  const CliRun b = cli("gen-data --kind motif --graphs 200 --seed 7 --out b.json", dir);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  EXPECT_EQ(load_dataset(dir / "a.json", DatasetFormat::kJson).dataset.graphs.size(), 200u);
  EXPECT_NE(a.out.find("200 graphs"), std::string::npos);
}

TEST(GenData, UsageAndParamErrors) {
  const fs::path dir = scratch("gen_err");
  EXPECT_EQ(cli("gen-data --kind motif --graphs 10", dir).code, 2);
  const CliRun zero = cli("gen-data --kind sbm --nodes 0 --out z.json", dir);
  EXPECT_EQ(zero.code, 2);
  EXPECT_NE(zero.err.find("InvalidParams"), std::string::npos);
  EXPECT_EQ(cli("gen-data --kind cubes --graphs 5 --out z.json", dir).code, 2);
  EXPECT_EQ(cli("gen-data --kind motif --graphs 5 --nodes 5 --out z.json", dir).code, 2);
}

// ---------------------------------------------------------------------------
// partition

TEST(PartitionCmd, LdaManifestsRepeatAndHistogramsConserve) {
  const fs::path dir = scratch("part");
  ASSERT_EQ(cli("gen-data --kind motif --graphs 120 --seed 2 --out d.json", dir).code, 0);
  const std::string args = "partition --input d.json --clients 4 --scheme lda --alpha 0.5 --seed 7 --out-dir ";
  const CliRun a = cli(args + "p1", dir);
  const CliRun b = cli(args + "p2", dir);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(dir / "p1" / "manifest.json"), slurp(dir / "p2" / "manifest.json"));
  EXPECT_EQ(slurp(dir / "p1" / "histogram.tsv"), a.out);
  const auto rows = lines(a.out);
  ASSERT_EQ(rows.size(), 5u);
  std::size_t total = 0;
  for (std::size_t j = 1; j < rows.size(); ++j) total += std::stoul(rows[j].substr(rows[j].rfind('\t') + 1));
  EXPECT_EQ(total, 120u);
  for (int j = 0; j < 4; ++j) {
    EXPECT_TRUE(fs::exists(dir / "p1" / ("client_" + std::to_string(j) + "_train.json")));
  }
}

TEST(PartitionCmd, SingleClientAndBadAlpha) {
  const fs::path dir = scratch("part1");
  ASSERT_EQ(cli("gen-data --kind motif --graphs 30 --seed 2 --out d.json", dir).code, 0);
  const CliRun one = cli("partition --input d.json --clients 1 --out-dir p", dir);
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(lines(one.out).size(), 2u);
  EXPECT_FALSE(fs::exists(dir / "p" / "client_1_train.json"));
  const CliRun alpha = cli("partition --input d.json --clients 2 --scheme lda --alpha 0 --out-dir q", dir);
  EXPECT_EQ(alpha.code, 2);
  EXPECT_NE(alpha.err.find("InvalidAlpha"), std::string::npos);
}

TEST(PartitionCmd, EgoNetworksFromNodeData) {
  const fs::path dir = scratch("part_ego");
  ASSERT_EQ(cli("gen-data --kind sbm --nodes 80 --seed 2 --out s.json", dir).code, 0);
  const CliRun r = cli("partition --input s.json --egos 40 --hops 2 --clients 4 --scheme lda --alpha 1 --seed 3 --out-dir e", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t total = 0;
  const auto rows = lines(r.out);
  for (std::size_t j = 1; j < rows.size(); ++j) total += std::stoul(rows[j].substr(rows[j].rfind('\t') + 1));
  EXPECT_EQ(total, 40u);
}

// ---------------------------------------------------------------------------
// train

fs::path write_config(const fs::path& dir, const ordered_json& doc, const std::string& name = "run.json") {
  spit(dir / name, doc.dump(2));
  return dir / name;
}

ParamVector model_of(const fs::path& dir) {
  const std::string bytes = slurp(dir / "model.bin");
  return deserialize_params(std::span<const std::uint8_t>(
                                reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()),
                            nullptr);
}

ordered_json report_of(const fs::path& dir) { return read_json_file(dir / "report.json"); }

TEST(TrainCmd, CentralizedWritesReportWithLossColumn) {
  const fs::path dir = scratch("train_c");
  ordered_json doc = valid_doc();
  doc["fl"]["rounds"] = 30;
  doc["fl"]["eval_frequency"] = 10;
  doc["fl"]["optimizer"] = {{"learning_rate", 0.01}};
  write_config(dir, doc);
  const CliRun r = cli("train --config run.json --centralized", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const ordered_json rep = report_of(dir / "out");
  EXPECT_EQ(rep["mode"], "centralized");
  ASSERT_EQ(rep["per_round"].size(), 30u);
  for (const auto& row : rep["per_round"]) EXPECT_TRUE(row["mean_train_loss"].is_number());
  const auto csv = lines(slurp(dir / "out" / "report.csv"));
  ASSERT_EQ(csv.size(), 31u);
  EXPECT_EQ(fields(csv[0])[2], "mean_train_loss");
  // Loss trends down over the run.
  const double first = rep["per_round"][0]["mean_train_loss"].get<double>();
  const double last = rep["per_round"][29]["mean_train_loss"].get<double>();
  EXPECT_LT(last, first);
  EXPECT_TRUE(fs::exists(dir / "out" / "timing.json"));
  EXPECT_FALSE(rep.dump().find("wall_ms") != std::string::npos);
}

TEST(TrainCmd, SingleClientFederatedMatchesCentralized) {
  const fs::path dir = scratch("train_k1");
  write_config(dir, valid_doc());
  ASSERT_EQ(cli("train --config run.json --clients 1 --rounds 3 --output-dir fed", dir).code, 0);
  ASSERT_EQ(cli("train --config run.json --centralized --rounds 3 --output-dir cen", dir).code, 0);
  const ordered_json f = report_of(dir / "fed"), c = report_of(dir / "cen");
  EXPECT_EQ(f["per_round"], c["per_round"]);
  EXPECT_EQ(f["final_test_metric"], c["final_test_metric"]);
  EXPECT_EQ(slurp(dir / "fed" / "model.bin"), slurp(dir / "cen" / "model.bin"));
}

TEST(TrainCmd, SecureMatchesPlainWithinTolerance) {
  const fs::path dir = scratch("train_sec");
  ordered_json doc = valid_doc();
  doc["fl"]["rounds"] = 3;
  write_config(dir, doc);
  ASSERT_EQ(cli("train --config run.json --output-dir plain", dir).code, 0);
  const CliRun s = cli("train --config run.json --secure --set secure.threshold=3 --output-dir sec", dir);
  ASSERT_EQ(s.code, 0) << s.err;
  const ordered_json p = report_of(dir / "plain"), q = report_of(dir / "sec");
  EXPECT_TRUE(q["secure"].get<bool>());
  EXPECT_NEAR(p["final_test_metric"].get<double>(), q["final_test_metric"].get<double>(), 1e-4);
  EXPECT_NEAR(p["final_val_metric"].get<double>(), q["final_val_metric"].get<double>(), 1e-4);
  const ParamVector a = model_of(dir / "plain"), b = model_of(dir / "sec");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-4);
}

TEST(TrainCmd, TooFewSurvivorsExitsFour) {
  const fs::path dir = scratch("train_abort");
  ordered_json doc = valid_doc();
  doc["secure"] = {{"threshold", 3}};
  doc["fl"]["dropouts"] = {{{"round", 1}, {"client", 0}}, {{"round", 1}, {"client", 3}}};
  write_config(dir, doc);
  const CliRun r = cli("train --config run.json", dir);
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("InsufficientSurvivors"), std::string::npos);
  const CliRun tcp = cli("train --config run.json --transport tcp --output-dir t", dir);
  EXPECT_EQ(tcp.code, 4) << tcp.err;
}

TEST(TrainCmd, OneDropoutStillSucceedsUnderSecureAggregation) {
  const fs::path dir = scratch("train_drop");
  ordered_json doc = valid_doc();
  doc["secure"] = {{"threshold", 3}};
  doc["fl"]["dropouts"] = {{{"round", 2}, {"client", 1}}};
  write_config(dir, doc);
  const CliRun r = cli("train --config run.json", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const ordered_json rep = report_of(dir / "out");
  EXPECT_EQ(rep["per_round"][1]["participants"], 3);
}

TEST(TrainCmd, TcpMatchesMemoryByteForByte) {
  const fs::path dir = scratch("train_tcp");
  ordered_json doc = valid_doc();
  doc["fl"]["clients_per_round"] = 3;
  write_config(dir, doc);
  ASSERT_EQ(cli("train --config run.json --output-dir mem", dir).code, 0);
  const CliRun t = cli("train --config run.json --transport tcp --output-dir tcp", dir);
  ASSERT_EQ(t.code, 0) << t.err;
  for (const char* f : {"report.json", "report.csv", "model.bin"}) {
    EXPECT_EQ(slurp(dir / "mem" / f), slurp(dir / "tcp" / f)) << f;
  }
}

TEST(TrainCmd, RerunIsByteIdentical) {
  const fs::path dir = scratch("train_det");
  write_config(dir, valid_doc());
  ASSERT_EQ(cli("train --config run.json --output-dir a --secure --set secure.threshold=2", dir).code, 0);
  ASSERT_EQ(cli("train --config run.json --output-dir b --secure --set secure.threshold=2", dir).code, 0);
  for (const char* f : {"report.json", "report.csv", "model.bin"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
}

TEST(TrainCmd, FlagsBeatSetWhichBeatsFile) {
  const fs::path dir = scratch("train_prec");
  write_config(dir, valid_doc());
  ASSERT_EQ(cli("train --config run.json --set fl.rounds=3 --output-dir s", dir).code, 0);
  EXPECT_EQ(report_of(dir / "s")["per_round"].size(), 3u);
  ASSERT_EQ(cli("train --config run.json --set fl.rounds=3 --rounds 1 --output-dir f", dir).code, 0);
  EXPECT_EQ(report_of(dir / "f")["per_round"].size(), 1u);
  EXPECT_EQ(report_of(dir / "f")["config"]["fl"]["rounds"], 1);
}

TEST(TrainCmd, InvalidConfigsExitTwoNamingKey) {
  const fs::path dir = scratch("train_bad");
  const CliRun r = cli("train --config '" + (kFixtures / "bad_partition_clients_mismatch.json").string() + "'", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("partition.num_clients"), std::string::npos);
  const CliRun m = cli("train --config '" + (kFixtures / "bad_malformed.json").string() + "'", dir);
  EXPECT_EQ(m.code, 2);
  write_config(dir, valid_doc());
  EXPECT_EQ(cli("train --config run.json --transport carrier-pigeon", dir).code, 2);
  EXPECT_EQ(cli("train --config run.json --set fl.nope=1", dir).code, 2);
  EXPECT_EQ(cli("train", dir).code, 2);
}

TEST(TrainCmd, DatasetFileInput) {
  const fs::path dir = scratch("train_file");
  ASSERT_EQ(cli("gen-data --kind motif --graphs 40 --seed 3 --out data.json", dir).code, 0);
  ordered_json doc = valid_doc();
  doc["data"] = {{"path", "data.json"}};
  write_config(dir, doc);
  const CliRun r = cli("train --config run.json --rounds 1", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(report_of(dir / "out")["config"]["data"]["path"], "data.json");
}

// Node-level path: planetoid files, ego sampling, node classification.
TEST(TrainCmd, PlanetoidEgoPipeline) {
  const fs::path dir = scratch("train_planetoid");
  SbmParams sp;
  sp.num_nodes = 150;
  const GraphDataset data = gen_sbm_node(sp, 6);
  const Graph& g = data.graphs[0];
  std::ostringstream content, cites;
  for (std::size_t u = 0; u < g.num_nodes(); ++u) {
    content << "n" << u;
    for (double v : g.node_features().row(u)) content << '\t' << format_double(v);
    content << "\tc" << (*g.node_labels())[u] << '\n';
  }
  for (const auto& [u, v] : g.undirected_edges()) cites << 'n' << u << "\tn" << v << '\n';
  cites << "n0\tghost\n";
  fs::create_directories(dir / "sbm");
  spit(dir / "sbm" / "sbm.content", content.str());
  spit(dir / "sbm" / "sbm.cites", cites.str());
  const ordered_json doc = ordered_json::parse(R"({
    "data": {"path": "sbm", "format": "planetoid", "egos": {"count": 60, "hops": 2, "seed": 1}},
    "partition": {"scheme": "lda", "alpha": 0.5, "seed": 2},
    "model": {"task": "node_classification", "hidden_dim": 8, "node_embedding_dim": 8},
    "fl": {"num_clients": 3, "rounds": 3, "eval_frequency": 1, "seed": 2, "metric": "micro_f1"}
  })");
  write_config(dir, doc);
  const CliRun r = cli("train --config run.json", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const ordered_json report = report_of(dir / "out");
  EXPECT_EQ(report["metric"], "micro_f1");
  ASSERT_EQ(report["per_round"].size(), 3u);
  for (const auto& row : report["per_round"]) {
    EXPECT_EQ(row["participants"], 3);
    EXPECT_GE(row["test_metric"].get<double>(), 0.0);
    EXPECT_LE(row["test_metric"].get<double>(), 1.0);
  }
  EXPECT_EQ(cli("train --config run.json --set data.egos.count=100000", dir).code, kExitInvalid);
}

// ---------------------------------------------------------------------------
// sweep

std::vector<std::vector<std::string>> board_rows(const fs::path& dir) {
  std::vector<std::vector<std::string>> rows;
  for (const std::string& l : lines(slurp(dir / "leaderboard.csv"))) rows.push_back(fields(l));
  return rows;
}

TEST(SweepCmd, GridShapesAndBestFlag) {
  const fs::path dir = scratch("sweep");
  ordered_json base = valid_doc();
  base["fl"]["rounds"] = 1;
  write_config(dir, base, "base.json");
  spit(dir / "one.json", R"({"base": "base.json", "grid": {"fl.seed": [1]}, "output_dir": "s1"})");
  spit(dir / "four.json", R"({"base": "base.json", "grid": {"fl.seed": [1, 2], "model.hidden_dim": [4, 8]}, "output_dir": "s4"})");
  ASSERT_EQ(cli("sweep --grid one.json", dir).code, 0);
  const CliRun four = cli("sweep --grid four.json", dir);
  ASSERT_EQ(four.code, 0) << four.err;
  EXPECT_EQ(board_rows(dir / "s1").size(), 2u);
  const auto rows = board_rows(dir / "s4");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0][1], "fl.seed");
  EXPECT_EQ(rows[0][2], "model.hidden_dim");
  EXPECT_EQ(rows[1][1], "1");
  EXPECT_EQ(rows[1][2], "4");
  EXPECT_EQ(rows[2][2], "8");
  EXPECT_EQ(rows[3][1], "2");
  int flagged = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) flagged += rows[i].back() == "1";
  EXPECT_EQ(flagged, 1);
  EXPECT_EQ(lines(slurp(dir / "s4" / "leaderboard_timing.csv")).size(), 5u);
  EXPECT_TRUE(fs::exists(dir / "s4" / "trials" / "trial_3" / "report.json"));
}

TEST(SweepCmd, LearningRateGridFromTheBenchmarkRange) {
  const fs::path dir = scratch("sweep_lr");
  ordered_json base = valid_doc();
  base["fl"]["rounds"] = 2;
  write_config(dir, base, "base.json");
  spit(dir / "grid.json",
       R"({"base": "base.json", "grid": {"fl.optimizer.learning_rate": [0.00015, 0.0015, 0.015, 0.15]}, "output_dir": "lr"})");
  ASSERT_EQ(cli("sweep --grid grid.json", dir).code, 0);
  const auto rows = board_rows(dir / "lr");
  ASSERT_EQ(rows.size(), 5u);
  const std::vector<std::string> expected = {"0.00015", "0.0015", "0.015", "0.15"};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(rows[i + 1][1], expected[i]);
  // Re-run: byte-identical leaderboard.
  ASSERT_EQ(cli("sweep --grid grid.json --out-dir lr2", dir).code, 0);
  EXPECT_EQ(slurp(dir / "lr" / "leaderboard.csv"), slurp(dir / "lr2" / "leaderboard.csv"));
}

TEST(SweepCmd, UnknownKeyExitsTwo) {
  const fs::path dir = scratch("sweep_bad");
  write_config(dir, valid_doc(), "base.json");
  spit(dir / "g.json", R"({"base": "base.json", "grid": {"fl.lr": [0.1]}})");
  const CliRun r = cli("sweep --grid g.json", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("fl.lr"), std::string::npos);
  spit(dir / "h.json", R"({"base": "base.json", "grid": {"fl.rounds": []}})");
  EXPECT_EQ(cli("sweep --grid h.json", dir).code, 2);
  spit(dir / "i.json", R"({"base": "base.json", "grid": {"fl.rounds": [0]}})");
  EXPECT_EQ(cli("sweep --grid i.json", dir).code, 2);
}

}  // namespace
}  // namespace fedgraph
