// pmplus: key generation, hashing, verification suites and benchmarks.
//
// Exit codes: 0 success, 1 property failure, 2 I/O error, 3 invalid key
// file, 64 usage error.

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmplus/bench.hpp"
#include "pmplus/keygen.hpp"
#include "pmplus/suites.hpp"
#include "pmplus/tree_hasher.hpp"

namespace {

enum exit_code : int { kOk = 0, kPropertyFailure = 1, kIoError = 2, kKeyError = 3, kUsage = 64 };

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::byte> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw io_error("cannot read " + path);
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

// FNV-1a over the key file; identifies a file without revealing keys.
std::uint64_t fingerprint(std::span<const std::byte> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto b : bytes) h = (h ^ std::to_integer<std::uint64_t>(b)) * 0x100000001b3ull;
  return h;
}

// --seed, else PMPLUS_SEED, else nullopt.
std::optional<std::uint64_t> effective_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("PMPLUS_SEED")) {
    try {
      return std::stoull(env, nullptr, 0);
    } catch (const std::exception&) {
      throw CLI::ValidationError("PMPLUS_SEED", std::string("not an integer: ") + env);
    }
  }
  return std::nullopt;
}

int cmd_keygen(unsigned bits, const std::optional<std::uint64_t>& seed_flag, const std::string& out) {
  const auto seed = effective_seed(seed_flag);
  std::vector<std::byte> file;
  if (bits == 32)
    file = pmplus::save_schedule(seed ? pmplus::generate_schedule<pmplus::pm32>(*seed)
                                      : pmplus::generate_schedule_from_entropy<pmplus::pm32>());
  else
    file = pmplus::save_schedule(seed ? pmplus::generate_schedule<pmplus::pm64>(*seed)
                                      : pmplus::generate_schedule_from_entropy<pmplus::pm64>());
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os) throw io_error("cannot open " + out + " for writing");
  os.write(reinterpret_cast<const char*>(file.data()), static_cast<std::streamsize>(file.size()));
  os.close();
  if (!os) throw io_error("cannot write " + out);
  std::cerr << "wrote " << out << " bits=" << bits << " size=" << file.size()
            << " fingerprint=" << pmplus::to_hex(fingerprint(file))
            << " seed=" << (seed ? std::to_string(*seed) : std::string("entropy")) << '\n';
  return kOk;
}

template <class P>
typename P::word hash_stream(const pmplus::key_schedule<P>& ks, std::istream& in) {
  pmplus::tree_hasher<P> h(ks);
  std::vector<char> chunk(64 * 1024);
  while (in) {
    in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got) h.update(std::as_bytes(std::span(chunk.data(), got)));
  }
  if (in.bad()) throw io_error("read error");
  return h.finalize();
}

int cmd_hash(const std::string& key_path, std::vector<std::string> inputs) {
  const auto schedule = pmplus::load_any_schedule(read_file(key_path));
  if (inputs.empty()) inputs.push_back("-");
  int status = kOk;
  for (const auto& name : inputs) {
    try {
      std::string digest;
      auto run = [&](std::istream& in) {
        std::visit([&](const auto& ks) { digest = pmplus::to_hex(hash_stream(ks, in)); }, schedule);
      };
      if (name == "-") {
        run(std::cin);
      } else {
        std::ifstream in(name, std::ios::binary);
        if (!in) throw io_error("cannot open " + name);
        run(in);
      }
      std::cout << digest << "  " << name << '\n';
    } catch (const io_error& e) {
      std::cerr << "pmplus hash: " << e.what() << '\n';
      status = kIoError;
    }
  }
  return status;
}

int cmd_test(const std::string& suite, const std::optional<std::uint64_t>& seed_flag,
             pmplus::suites::suite_config cfg) {
  cfg.seed = effective_seed(seed_flag).value_or(1);
  std::vector<std::string> names;
  if (suite == "all")
    names.assign(pmplus::suites::kSuiteNames.begin(), pmplus::suites::kSuiteNames.end());
  else
    names.push_back(suite);
  bool all_passed = true;
  for (const auto& name : names) {
    const auto res = pmplus::suites::run_suite(name, cfg);
    if (!res) {
      std::cerr << "pmplus test: unknown suite '" << name << "'\n";
      return kUsage;
    }
    std::cout << "suite=" << res->name << " seed=" << cfg.seed << '\n';
    for (const auto& line : res->lines) std::cout << "  " << line << '\n';
    std::cout << "suite=" << res->name << " result=" << (res->passed ? "PASS" : "FAIL") << '\n';
    all_passed = all_passed && res->passed;
  }
  return all_passed ? kOk : kPropertyFailure;
}

int cmd_bench(unsigned bits, const std::optional<std::string>& key_path,
              const std::optional<std::uint64_t>& seed_flag, unsigned repetitions) {
  pmplus::bench::bench_options opt;
  opt.repetitions = repetitions;
  std::vector<pmplus::bench::bench_row> rows;
  auto run = [&](auto tag) {
    using P = decltype(tag);
    pmplus::key_schedule<P> ks;
    if (key_path) {
      ks = pmplus::load_schedule<P>(read_file(*key_path));
    } else {
      const auto seed = effective_seed(seed_flag).value_or(1);
      std::cerr << "pmplus bench: no --key, using generated schedule seed=" << seed << '\n';
      ks = pmplus::generate_schedule<P>(seed);
    }
    rows = pmplus::bench::run<P>(ks, opt);
  };
  if (bits == 32)
    run(pmplus::pm32{});
  else
    run(pmplus::pm64{});
  pmplus::bench::write_csv(std::cout, rows);
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"PM+ almost-universal hashing: keys, digests, verification suites, benchmarks"};
  app.require_subcommand(1);

  unsigned bits = 64;
  std::optional<std::uint64_t> seed;
  std::string out, key;
  std::optional<std::string> bench_key;
  std::vector<std::string> inputs;
  std::string suite;
  unsigned repetitions = 9;
  pmplus::suites::suite_config cfg;

  auto* keygen = app.add_subcommand("keygen", "Generate a key file");
  keygen->add_option("--bits", bits, "Word size")->required()->check(CLI::IsMember({32u, 64u}));
  keygen->add_option("--seed", seed, "Deterministic seed (default: PMPLUS_SEED, else OS entropy)");
  keygen->add_option("--out", out, "Output path")->required();

  auto* hash = app.add_subcommand("hash", "Hash files (or stdin, named '-')");
  hash->add_option("--key", key, "Key file")->required();
  hash->add_option("inputs", inputs, "Input files");

  auto* test = app.add_subcommand("test", "Run a verification suite");
  test->add_option("suite", suite, "Suite name, or 'all'")->required();
  test->add_option("--seed", seed, "Seed (default: PMPLUS_SEED, else 1)");
  test->add_option("--fuzz-iterations", cfg.fuzz_iterations, "Reduction fuzz cases per width");
  test->add_option("--trials", cfg.avalanche_trials, "Avalanche trials per length");
  test->add_option("--mix-iterations", cfg.mix_iterations, "Mix round trips per width");
  test->add_flag("--exhaustive", cfg.mix_exhaustive32, "Also check all 2^32 mix inputs");
  test->add_option("--threads", cfg.threads, "Worker threads for sharded suites");

  auto* bench = app.add_subcommand("bench", "Throughput over 64 B .. 256 kB, CSV on stdout");
  bench->add_option("--bits", bits, "Word size")->required()->check(CLI::IsMember({32u, 64u}));
  bench->add_option("--key", bench_key, "Key file (default: schedule generated from --seed)");
  bench->add_option("--seed", seed, "Seed used when no key file is given");
  bench->add_option("--repetitions", repetitions, "Timed repetitions per length")->check(CLI::Range(1u, 1000u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*keygen) return cmd_keygen(bits, seed, out);
    if (*hash) return cmd_hash(key, inputs);
    if (*test) return cmd_test(suite, seed, cfg);
    if (*bench) return cmd_bench(bits, bench_key, seed, repetitions);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "pmplus: " << e.what() << '\n';
    return kUsage;
  } catch (const io_error& e) {
    std::cerr << "pmplus: " << e.what() << '\n';
    return kIoError;
  } catch (const pmplus::error& e) {
    std::cerr << "pmplus: invalid key file: " << e.what() << '\n';
    return kKeyError;
  }
  return kUsage;
}
