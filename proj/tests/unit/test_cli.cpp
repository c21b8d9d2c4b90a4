#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "umsp/bytes.hpp"
#include "umsp/codec/store.hpp"

// Drives the built binary end to end; the path comes from the test
// harness (UMSP_CLI_PATH) so the same suite runs from any build tree.

namespace fs = std::filesystem;
using umsp::Bytes;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr interleaved
};

std::string cli_path() {
  const char* env = std::getenv("UMSP_CLI_PATH");
  if (env) return env;
  return fs::path(UMSP_SOURCE_DIR) / "build" / "umsp";
}

RunResult run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 512> buf;
  while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, output};
}

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("umsp_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cli: init reports parameters and refuses re-init") {
  fs::path dir = fresh_dir("init");
  std::string ledger = (dir / "ledger").string();

  RunResult r = run("init --ledger " + ledger + " --backend toy --block-bytes 16 --seed 00");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("shards/block: 4 x 4") != std::string::npos);

  // the state file holds exactly 4 shards
  umsp::codec::LedgerStore store(dir / "ledger");
  auto params = store.load_params();
  CHECK(store.load_state(params).shards().count() == 4);

  RunResult again = run("init --ledger " + ledger + " --backend toy --block-bytes 16");
  CHECK(again.exit_code == 3);
  CHECK(again.output.find("already contains a ledger") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("cli: fixed-seed toy runs are byte-identical") {
  fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  for (const fs::path& dir : {a, b}) {
    std::string ledger = (dir / "ledger").string();
    write_text(dir / "m.txt", "the cargo lands at pier 7");
    CHECK(run("init --ledger " + ledger + " --backend toy --block-bytes 32 --seed c0ffee")
              .exit_code == 0);
    CHECK(run("keygen --ledger " + ledger + " user u1 --seed 11").exit_code == 0);
    CHECK(run("publish --ledger " + ledger + " --user u1 " + (dir / "m.txt").string() +
              " --seed 22")
              .exit_code == 0);
    CHECK(run("update --ledger " + ledger + " --seed 33").exit_code == 0);
  }
  for (const char* f : {"params", "chain", "state", "keys/u1.pub", "secrets/u1",
                        "secrets/keeper"}) {
    CAPTURE(f);
    CHECK(read_text(a / "ledger" / f) == read_text(b / "ledger" / f));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("cli: the full grant/revoke/re-grant scenario") {
  fs::path dir = fresh_dir("scenario");
  std::string ledger = (dir / "ledger").string();
  std::string msg = "three boxes of signal flares, dock 4, before tide";
  write_text(dir / "in.txt", msg);

  CHECK(run("init --ledger " + ledger + " --backend toy --block-bytes 64 --seed 01").exit_code ==
        0);
  CHECK(run("keygen --ledger " + ledger + " user alice --seed 02").exit_code == 0);
  CHECK(run("keygen --ledger " + ledger + " provider clinic --seed 03").exit_code == 0);

  CHECK(run("publish --ledger " + ledger + " --user alice " + (dir / "in.txt").string() +
            " --seed 04")
            .exit_code == 0);

  std::string grant1 = (dir / "grant1").string();
  CHECK(run("grant --ledger " + ledger + " --user alice --block 1 --provider clinic --out " +
            grant1 + " --seed 05")
            .exit_code == 0);
  CHECK(run("decrypt --ledger " + ledger + " --provider clinic --block 1 --grant " + grant1 +
            " --out " + (dir / "out.txt").string())
            .exit_code == 0);
  CHECK(read_text(dir / "out.txt") == msg);

  CHECK(run("audit --ledger " + ledger).exit_code == 0);
  CHECK(run("update --ledger " + ledger + " --seed 06").exit_code == 0);

  // pre-update grant: warned, then digest mismatch, distinct exit code
  RunResult stale = run("decrypt --ledger " + ledger + " --provider clinic --block 1 --grant " +
                        grant1 + " --out " + (dir / "out2.txt").string());
  CHECK(stale.exit_code == 5);
  CHECK(stale.output.find("warning: grant was unlocked at epoch 0") != std::string::npos);
  CHECK(stale.output.find("digest mismatch") != std::string::npos);

  // re-grant after the update
  std::string grant2 = (dir / "grant2").string();
  CHECK(run("grant --ledger " + ledger + " --user alice --block 1 --provider clinic --out " +
            grant2 + " --seed 07")
            .exit_code == 0);
  CHECK(run("decrypt --ledger " + ledger + " --provider clinic --block 1 --grant " + grant2 +
            " --out " + (dir / "out3.txt").string())
            .exit_code == 0);
  CHECK(read_text(dir / "out3.txt") == msg);

  // rotation between updates keeps everything consistent
  CHECK(run("rotate-keeper --ledger " + ledger).exit_code == 0);
  CHECK(run("update --ledger " + ledger + " --seed 08").exit_code == 0);
  CHECK(run("audit --ledger " + ledger).exit_code == 0);

  fs::remove_all(dir);
}

TEST_CASE("cli: audit pins a hex-edited chain file") {
  fs::path dir = fresh_dir("tamper");
  std::string ledger = (dir / "ledger").string();
  write_text(dir / "m.txt", "brief payload");
  CHECK(run("init --ledger " + ledger + " --backend toy --block-bytes 16 --seed 0a").exit_code ==
        0);
  CHECK(run("keygen --ledger " + ledger + " user u --seed 0b").exit_code == 0);
  CHECK(run("publish --ledger " + ledger + " --user u " + (dir / "m.txt").string() + " --seed 0c")
            .exit_code == 0);
  CHECK(run("audit --ledger " + ledger).exit_code == 0);

  // flip one byte inside the block record
  fs::path chain = dir / "ledger" / "chain";
  std::string bytes = read_text(chain);
  bytes[bytes.size() / 2] ^= 0x01;
  write_text(chain, bytes);

  RunResult r = run("audit --ledger " + ledger);
  CHECK(r.exit_code == 4);
  CHECK(r.output.find("block record 1") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("cli: actionable errors and distinct exit codes") {
  fs::path dir = fresh_dir("errors");
  std::string ledger = (dir / "ledger").string();
  write_text(dir / "m.txt", "x");

  // no ledger yet
  CHECK(run("audit --ledger " + ledger).exit_code == 3);

  CHECK(run("init --ledger " + ledger + " --backend toy --block-bytes 16 --seed 0d").exit_code ==
        0);
  CHECK(run("keygen --ledger " + ledger + " user u --seed 0e").exit_code == 0);

  // unknown identities
  RunResult r1 = run("publish --ledger " + ledger + " --user ghost " + (dir / "m.txt").string());
  CHECK(r1.exit_code == 3);
  CHECK(r1.output.find("keygen") != std::string::npos);
  CHECK(run("grant --ledger " + ledger + " --user u --block 1 --provider nobody --out " +
            (dir / "g").string())
            .exit_code == 3);

  // block without a key
  CHECK(run("keygen --ledger " + ledger + " provider p --seed 0f").exit_code == 0);
  CHECK(run("grant --ledger " + ledger + " --user u --block 9 --provider p --out " +
            (dir / "g").string())
            .exit_code == 3);

  // a user identity passed where a provider is needed is a record-type error
  CHECK(run("grant --ledger " + ledger + " --user u --block 9 --provider u --out " +
            (dir / "g").string())
            .exit_code == 4);

  // oversized file
  write_text(dir / "big.txt", std::string(100, 'y'));
  CHECK(run("publish --ledger " + ledger + " --user u " + (dir / "big.txt").string())
            .exit_code == 2);

  // duplicate identity
  CHECK(run("keygen --ledger " + ledger + " user u").exit_code == 3);

  // bad usage
  CHECK(run("publish --ledger " + ledger).exit_code == 2);
  CHECK(run("frobnicate --ledger " + ledger).exit_code == 2);

  fs::remove_all(dir);
}

TEST_CASE("cli: deterministic seeds are toy-only; secrets print only on export") {
  fs::path dir = fresh_dir("seedpolicy");
  std::string ledger = (dir / "ledger").string();

  RunResult r = run("init --ledger " + ledger +
                    " --backend production --block-bytes 1152 --seed ff");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("toy backend") != std::string::npos);

  CHECK(run("init --ledger " + ledger + " --backend toy --block-bytes 16 --seed 10").exit_code ==
        0);
  CHECK(run("keygen --ledger " + ledger + " user u --seed 11").exit_code == 0);

  RunResult exp = run("export-secret --ledger " + ledger + " keeper");
  CHECK(exp.exit_code == 0);
  CHECK(exp.output.find("time_key=") != std::string::npos);

  RunResult exp2 = run("export-secret --ledger " + ledger + " u");
  CHECK(exp2.exit_code == 0);
  CHECK(exp2.output.find("mu=") != std::string::npos);
  CHECK(exp2.output.find("v=") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("cli: production backend end-to-end") {
  fs::path dir = fresh_dir("prod");
  std::string ledger = (dir / "ledger").string();
  std::string msg = "production-grade secret";
  write_text(dir / "in.txt", msg);

  // delta = 576: two shards
  CHECK(run("init --ledger " + ledger + " --backend production --block-bytes 1152").exit_code ==
        0);
  CHECK(run("keygen --ledger " + ledger + " user u").exit_code == 0);
  CHECK(run("keygen --ledger " + ledger + " provider p").exit_code == 0);
  CHECK(run("publish --ledger " + ledger + " --user u " + (dir / "in.txt").string()).exit_code ==
        0);
  std::string grant = (dir / "g").string();
  CHECK(run("grant --ledger " + ledger + " --user u --block 1 --provider p --out " + grant)
            .exit_code == 0);
  CHECK(run("decrypt --ledger " + ledger + " --provider p --block 1 --grant " + grant +
            " --out " + (dir / "out.txt").string())
            .exit_code == 0);
  CHECK(read_text(dir / "out.txt") == msg);
  CHECK(run("audit --ledger " + ledger + " --json").exit_code == 0);
  CHECK(run("update --ledger " + ledger).exit_code == 0);
  RunResult stale = run("decrypt --ledger " + ledger + " --provider p --block 1 --grant " +
                        grant + " --out " + (dir / "out2.txt").string());
  CHECK(stale.exit_code == 5);

  fs::remove_all(dir);
}
