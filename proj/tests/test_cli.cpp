// Copyright 2026 The roadsound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <string>

#include "oracles.hpp"

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args`; stdout is captured, stderr is discarded.
Outcome Cli(const std::string& args) {
  const std::string cmd = std::string(ROADSOUND_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string Q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

// A small corpus and a quickly trained model shared by the tests below.
struct Fixture {
  oracle::TempDir dir{"cli"};
  std::filesystem::path manifest = dir / "corpus" / "manifest.csv";
  std::filesystem::path model = dir / "m.ckpt";

  Fixture() {
    REQUIRE(Cli("-j 1 synth --out-dir " + Q(dir / "corpus") + " --per-class 10 --seed 3").code ==
            0);
    REQUIRE(Cli("-j 1 train -q --manifest " + Q(manifest) + " --folds 2 --epochs 1 --out " +
                Q(model))
                .code == 0);
  }
};

Fixture& Shared() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_CASE("help lists every subcommand and unknown flags are rejected") {
  const auto help = Cli("--help");
  CHECK(help.code == 0);
  for (const char* s : {"synth", "augment", "extract", "train", "predict", "serve", "--jobs",
                        "--config"}) {
    CHECK_MESSAGE(help.out.find(s) != std::string::npos, s);
  }
  const auto train_help = Cli("train --help");
  CHECK(train_help.code == 0);
  for (const char* s : {"--manifest", "--folds", "--features", "--out", "--epochs", "--seed"}) {
    CHECK_MESSAGE(train_help.out.find(s) != std::string::npos, s);
  }
  CHECK(Cli("train --bogus").code != 0);
  CHECK(Cli("").code != 0);
  CHECK(Cli("extract --manifest x.csv --features wavelet").code != 0);
}

TEST_CASE("extract reports shapes for each feature kind") {
  auto& f = Shared();
  const auto gfcc = Cli("-j 1 extract --manifest " + Q(f.manifest));
  CHECK(gfcc.code == 0);
  CHECK(gfcc.out == "gfcc: 40 entries, 130x40 + 13\n");
  const auto mel = Cli("-j 1 extract --features melspec --manifest " + Q(f.manifest) +
                       " --cache-dir " + Q(f.dir / "cache"));
  CHECK(mel.code == 0);
  CHECK(mel.out == "melspec: 40 entries, 130x128 + 13\n");
  CHECK(!std::filesystem::is_empty(f.dir / "cache"));
}

TEST_CASE("failure classes map to distinct exit codes") {
  auto& f = Shared();
  oracle::TempDir dir("cli-fail");
  {
    std::ofstream m(dir / "empty.csv");
    m << "id,path,label,parent_id,aug_type,fold\n";
  }
  CHECK(Cli("extract --manifest " + Q(dir / "empty.csv")).code == 2);
  CHECK(Cli("extract --manifest " + Q(dir / "missing.csv")).code == 2);

  {
    std::ofstream w(dir / "bad.wav", std::ios::binary);
    w << "RIFF....WAVEjunk";
  }
  CHECK(Cli("predict --model " + Q(f.model) + " --wav " + Q(dir / "bad.wav")).code == 4);
  CHECK(Cli("predict --model " + Q(dir / "bad.wav") + " --wav " + Q(dir / "bad.wav")).code == 4);
  const auto ok = Cli("predict --model " + Q(f.model) + " --wav " +
                      Q(f.dir / "corpus" / "car" / "car_0000.wav"));
  CHECK(ok.code == 0);
  CHECK(ok.out.find(' ') != std::string::npos);

  {
    std::ofstream m(dir / "partial.csv");
    m << "id,path,label,parent_id,aug_type,fold\n"
      << "good," << (f.dir / "corpus" / "car" / "car_0000.wav").string() << ",car,,none,\n"
      << "gone," << (dir / "nope.wav").string() << ",truck,,none,\n";
  }
  const auto partial = Cli("-j 1 augment --manifest " + Q(dir / "partial.csv") + " --out-dir " +
                           Q(dir / "aug1"));
  CHECK(partial.code == 1);
  CHECK(partial.out.find("2 → 4 entries (1 failed)") != std::string::npos);
  CHECK(Cli("-j 1 augment --keep-going --manifest " + Q(dir / "partial.csv") + " --out-dir " +
            Q(dir / "aug2"))
            .code == 0);

  // Occupy a port so the server cannot bind it.
  const int fd = socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(fd >= 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  REQUIRE(bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  REQUIRE(listen(fd, 1) == 0);
  socklen_t len = sizeof addr;
  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  const int port = ntohs(addr.sin_port);
  CHECK(Cli("serve --model " + Q(f.model) + " --bind 127.0.0.1:" + std::to_string(port)).code ==
        5);
  close(fd);
  CHECK(Cli("serve --model " + Q(f.model) + " --bind nonsense").code == 5);
}

TEST_CASE("config file supplies defaults and flags override it") {
  oracle::TempDir dir("cli-config");
  {
    std::ofstream c(dir / "rs.toml");
    c << "jobs = 1\n[synth]\nper-class = 11\nseed = 4\n";
  }
  const auto from_config =
      Cli("--config " + Q(dir / "rs.toml") + " synth --out-dir " + Q(dir / "a"));
  CHECK(from_config.code == 0);
  CHECK(from_config.out.find("wrote 44 clips") != std::string::npos);
  const auto overridden = Cli("--config " + Q(dir / "rs.toml") + " synth --per-class 10 " +
                              "--out-dir " + Q(dir / "b"));
  CHECK(overridden.code == 0);
  CHECK(overridden.out.find("wrote 40 clips") != std::string::npos);
}
