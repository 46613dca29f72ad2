// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <touchbench.h>

namespace fs = std::filesystem;

namespace {

const char* kSynthCfg =
    "users=6\n"
    "sessions_per_user=2\n"
    "strokes_per_session=8\n"
    "seed=23\n";

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tb_capi_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version string is non-empty") {
  REQUIRE(tb_version() != nullptr);
  CHECK(std::string(tb_version()) == "0.1.0");
}

TEST_CASE("null arguments are usage errors with a message") {
  CHECK(tb_dataset_open(nullptr, nullptr, nullptr) == TB_USAGE_ERROR);
  CHECK(std::string(tb_last_error()) != "");
  tb_dataset* d = nullptr;
  CHECK(tb_dataset_from_synth(kSynthCfg, nullptr) == TB_USAGE_ERROR);
  CHECK(tb_dataset_save(nullptr, "/tmp/x.csv") == TB_USAGE_ERROR);
  CHECK(tb_run(nullptr, "", "/tmp", 1, nullptr) == TB_USAGE_ERROR);
  (void)d;
}

TEST_CASE("missing input file is a data error") {
  tb_dataset* d = nullptr;
  CHECK(tb_dataset_open("/nonexistent/definitely_missing.csv", nullptr, &d) == TB_DATA_ERROR);
  CHECK(d == nullptr);
  CHECK(std::string(tb_last_error()) != "");
}

TEST_CASE("synth save open validate round trip") {
  tb_dataset* d = nullptr;
  REQUIRE(tb_dataset_from_synth(kSynthCfg, &d) == TB_OK);
  REQUIRE(d != nullptr);

  char* info = nullptr;
  REQUIRE(tb_dataset_validate_info(d, &info) == TB_OK);
  auto j = nlohmann::json::parse(info);
  tb_string_free(info);
  CHECK(j.at("users") == 6);
  CHECK(j.at("sessions") == 12);
  CHECK(j.at("points").get<long long>() > 0);

  TempDir tmp;
  const fs::path csv = tmp.path / "d.csv";
  REQUIRE(tb_dataset_save(d, csv.string().c_str()) == TB_OK);

  tb_dataset* d2 = nullptr;
  REQUIRE(tb_dataset_open(csv.string().c_str(), nullptr, &d2) == TB_OK);
  char* info2 = nullptr;
  REQUIRE(tb_dataset_validate_info(d2, &info2) == TB_OK);
  CHECK(nlohmann::json::parse(info2).at("points") == j.at("points"));
  tb_string_free(info2);
  tb_dataset_free(d2);

  const fs::path feat = tmp.path / "features.csv";
  REQUIRE(tb_features_dump(d, feat.string().c_str()) == TB_OK);
  std::string header;
  std::ifstream fin(feat);
  std::getline(fin, header);
  CHECK(header.rfind("user_id,session_ordinal,stroke_start_ms,direction,", 0) == 0);

  tb_dataset_free(d);
}

TEST_CASE("run and report produce the documented artifacts") {
  tb_dataset* d = nullptr;
  REQUIRE(tb_dataset_from_synth(kSynthCfg, &d) == TB_OK);

  TempDir tmp;
  const fs::path run_dir = tmp.path / "run";
  const std::string spec = "variant=baseline\nclassifier=knn\nseed=3\n";
  REQUIRE(tb_run(d, spec.c_str(), run_dir.string().c_str(), 2, "unit-test run") == TB_OK);
  CHECK(fs::exists(run_dir / "manifest.json"));
  CHECK(fs::exists(run_dir / "results.jsonl"));
  CHECK(fs::exists(run_dir / "stats.json"));

  auto manifest = nlohmann::json::parse(slurp(run_dir / "manifest.json"));
  CHECK(manifest.at("tool_version") == "0.1.0");
  CHECK(manifest.at("command") == "unit-test run");
  CHECK(manifest.at("input").at("users") == 6);

  const fs::path rep_dir = tmp.path / "report";
  REQUIRE(tb_report((run_dir / "results.jsonl").string().c_str(),
                    rep_dir.string().c_str()) == TB_OK);
  CHECK(fs::exists(rep_dir / "summary.csv"));
  CHECK(fs::exists(rep_dir / "roc.csv"));
  std::string sum_header;
  std::ifstream sin(rep_dir / "summary.csv");
  std::getline(sin, sum_header);
  CHECK(sum_header == "variant,record,params,metric,value");
  std::string roc_header;
  std::ifstream rin(rep_dir / "roc.csv");
  std::getline(rin, roc_header);
  CHECK(roc_header == "fpr,tpr_mean,tpr_ci_low,tpr_ci_high");

  // Bad spec text comes back as a usage error, not a crash.
  CHECK(tb_run(d, "variant=bogus\n", (tmp.path / "x").string().c_str(), 1, nullptr) ==
        TB_USAGE_ERROR);
  tb_dataset_free(d);
}

TEST_CASE("config printers echo effective settings") {
  char* text = nullptr;
  REQUIRE(tb_print_spec_config("variant=p3_splits\nclassifier=knn\n", &text) == TB_OK);
  std::string s(text);
  tb_string_free(text);
  CHECK(s.find("variant=p3_splits") != std::string::npos);
  CHECK(s.find("classifier=knn") != std::string::npos);

  char* text2 = nullptr;
  REQUIRE(tb_print_synth_config(nullptr, &text2) == TB_OK);
  std::string s2(text2);
  tb_string_free(text2);
  CHECK(s2.find("users=60") != std::string::npos);

  CHECK(tb_print_spec_config("nope=1\n", &text) == TB_USAGE_ERROR);
}
