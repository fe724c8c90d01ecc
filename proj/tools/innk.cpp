// innk: corpus, index and simulation tooling plus the game server.

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <pthread.h>
#include <thread>

#include <CLI11.hpp>

#include "innk/classifier.hpp"
#include "innk/dataset.hpp"
#include "innk/errors.hpp"
#include "innk/server/ws_server.hpp"
#include "innk/tools/match_config_file.hpp"
#include "innk/tools/simulate.hpp"
#include "innk/tools/synth.hpp"

namespace {

using namespace innk;
namespace fs = std::filesystem;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Bad invocation that CLI11 cannot see on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string config;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed")->each([&c](const std::string&) { c.seed_set = true; });
  cmd->add_option("--config", c.config, "key = value settings file")->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output file");
}

server::ServerConfig config_of(const Common& c) {
  server::ServerConfig cfg = c.config.empty() ? server::ServerConfig{} : tools::load_config(c.config);
  if (c.seed_set) {
    cfg.seed = c.seed;
    cfg.room.match.rng_seed = c.seed;
  }
  return cfg;
}

/// Output stream for --out, or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw Error("cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish(const std::string& path) {
    if (!file_.is_open()) return;
    file_.close();
    if (!file_) throw Error("failed writing " + path);
  }

 private:
  std::ofstream file_;
};

std::vector<fs::path> as_paths(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

struct CorpusArgs {
  std::vector<std::string> files;
  std::size_t cap = 0;
  bool lenient = false;
  bool keep_unrecognized = false;
  std::vector<std::string> categories;
};

void add_corpus(CLI::App* cmd, CorpusArgs& a, bool positional) {
  if (positional) {
    cmd->add_option("files", a.files, "ndjson files")->check(CLI::ExistingFile);
  } else {
    cmd->add_option("--corpus", a.files, "ndjson files")->check(CLI::ExistingFile);
  }
  cmd->add_option("--cap", a.cap, "max drawings per category (0 = all)");
  cmd->add_flag("--lenient", a.lenient, "skip unparseable lines");
  cmd->add_flag("--keep-unrecognized", a.keep_unrecognized, "keep drawings flagged unrecognized");
  cmd->add_option("--categories", a.categories, "restrict to these categories")->delimiter(',');
}

LoadResult load(const CorpusArgs& a) {
  if (a.files.empty()) throw UsageError("no input files");
  LoadOptions opt;
  opt.per_category_cap = a.cap;
  opt.lenient = a.lenient;
  opt.require_recognized = !a.keep_unrecognized;
  opt.categories = a.categories;
  return load_dataset(as_paths(a.files), opt);
}

std::shared_ptr<const KnnIndex> read_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index " + path);
  return std::make_shared<const KnnIndex>(load_index(in));
}

InkBudgetTable read_budgets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open budgets " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return InkBudgetTable::from_json(text.str());
}

std::pair<std::string, std::uint16_t> split_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw UsageError("--bind expects host:port");
  const auto port = std::stoul(bind.substr(colon + 1));
  if (port > 65535) throw UsageError("port out of range");
  return {bind.substr(0, colon), static_cast<std::uint16_t>(port)};
}

int run(int argc, char** argv) {
  CLI::App app{"innk: drawing-game tooling and server"};
  app.require_subcommand(1);

  // ingest
  Common ingest_c;
  CorpusArgs ingest_a;
  auto* ingest = app.add_subcommand("ingest", "load ndjson drawings and report per-category counts");
  add_corpus(ingest, ingest_a, true);
  add_common(ingest, ingest_c);

  // synth
  Common synth_c;
  std::vector<std::string> synth_shapes;
  std::size_t per_category = 50;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic shape corpus");
  synth_cmd->add_option("--categories", synth_shapes, "shapes to draw (default: all)")->delimiter(',');
  synth_cmd->add_option("--per-category", per_category, "drawings per shape");
  add_common(synth_cmd, synth_c);

  // budgets
  Common budgets_c;
  CorpusArgs budgets_a;
  std::optional<double> budgets_mult;
  auto* budgets = app.add_subcommand("budgets", "compute per-category ink budgets");
  add_corpus(budgets, budgets_a, true);
  budgets->add_option("--ink-multiplier", budgets_mult, "budget = multiplier * mean ink");
  add_common(budgets, budgets_c);

  // build-index
  Common index_c;
  CorpusArgs index_a;
  std::size_t k = kDefaultNeighbors;
  auto* build = app.add_subcommand("build-index", "build the nearest-neighbour index");
  add_corpus(build, index_a, true);
  build->add_option("--k", k, "neighbours per query");
  add_common(build, index_c);

  // serve
  Common serve_c;
  CorpusArgs serve_a;
  std::string bind = "127.0.0.1:8080", serve_index, serve_budgets, static_dir;
  std::optional<double> serve_threshold, serve_mult;
  auto* serve = app.add_subcommand("serve", "run the WebSocket game server");
  serve->add_option("--bind", bind, "host:port");
  serve->add_option("--index", serve_index, "index file from build-index")->check(CLI::ExistingFile);
  serve->add_option("--budgets", serve_budgets, "budgets file")->check(CLI::ExistingFile);
  add_corpus(serve, serve_a, false);
  serve->add_option("--threshold", serve_threshold, "NN confidence threshold in [0, 1]");
  serve->add_option("--ink-multiplier", serve_mult, "ink budget multiplier");
  serve->add_option("--static", static_dir, "serve files from this directory")->check(CLI::ExistingDirectory);
  add_common(serve, serve_c);

  // simulate
  Common sim_c;
  CorpusArgs sim_a;
  std::string sim_index, sim_budgets;
  std::vector<std::string> strategies{"clean", "noise", "rebus-prefix"};
  std::size_t trials = 100;
  std::optional<double> sim_threshold;
  bool no_mask = false;
  auto* simulate = app.add_subcommand("simulate", "replay drawings under player strategies");
  simulate->add_option("--index", sim_index, "index file")->check(CLI::ExistingFile);
  simulate->add_option("--budgets", sim_budgets, "budgets file")->check(CLI::ExistingFile);
  add_corpus(simulate, sim_a, false);
  simulate->add_option("--strategy", strategies, "clean, noise, rebus-prefix")->delimiter(',');
  simulate->add_option("--trials", trials, "number of trials");
  simulate->add_option("--threshold", sim_threshold, "NN confidence threshold in [0, 1]");
  simulate->add_flag("--no-mask", no_mask, "track the raw argmax, ignoring wrong guesses");
  add_common(simulate, sim_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (ingest->parsed()) {
    const auto res = load(ingest_a);
    const auto& ds = res.dataset;
    std::size_t width = 8;
    for (const auto& c : ds.categories()) width = std::max(width, c.size() + 2);
    for (std::size_t i = 0; i < ds.categories().size(); ++i) {
      std::cout << std::left << std::setw(static_cast<int>(width)) << ds.categories()[i]
                << ds.examples(i).size() << '\n';
    }
    std::cout << "total " << ds.total_examples() << ", skipped " << res.skipped_lines
              << ", unrecognized " << res.unrecognized_lines << '\n';
    if (!ingest_c.out.empty()) {
      Sink sink(ingest_c.out);
      for (std::size_t i = 0; i < ds.categories().size(); ++i)
        for (const auto& ex : ds.examples(i)) sink.stream() << to_ndjson_line(ex) << '\n';
      sink.finish(ingest_c.out);
    }
    return 0;
  }

  if (synth_cmd->parsed()) {
    if (per_category < 1) throw UsageError("--per-category must be at least 1");
    if (synth_shapes.empty()) synth_shapes = synth::shape_names();
    for (const auto& s : synth_shapes) {
      if (!synth::is_shape(s)) throw UsageError("unknown synthetic category '" + s + "'");
    }
    Sink sink(synth_c.out);
    synth::write_corpus(synth::generate_corpus(synth_shapes, per_category, synth_c.seed), sink.stream());
    sink.finish(synth_c.out);
    return 0;
  }

  if (budgets->parsed()) {
    const auto cfg = config_of(budgets_c);
    const double mult = budgets_mult.value_or(cfg.room.match.ink_multiplier);
    const auto table = compute_ink_budgets(load(budgets_a).dataset, mult);
    Sink sink(budgets_c.out);
    sink.stream() << table.to_json() << '\n';
    sink.finish(budgets_c.out);
    return 0;
  }

  if (build->parsed()) {
    if (index_c.out.empty()) throw UsageError("build-index needs --out");
    const auto ds = load(index_a).dataset;
    const auto index = KnnIndex::build(ds, k);
    std::ofstream out(index_c.out, std::ios::binary);
    if (!out) throw Error("cannot write " + index_c.out);
    save_index(index, out);
    out.close();
    if (!out) throw Error("failed writing " + index_c.out);
    std::cout << "indexed " << index.points().size() << " drawings in "
              << index.categories().size() << " categories (k=" << index.k() << ")\n";
    return 0;
  }

  if (serve->parsed()) {
    auto cfg = config_of(serve_c);
    if (serve_threshold) cfg.room.match.confidence_threshold = *serve_threshold;
    if (serve_mult) cfg.room.match.ink_multiplier = *serve_mult;
    try {
      cfg.room.match.validate();
    } catch (const ArgumentError& e) {
      throw UsageError(e.what());
    }
    if (serve_index.empty() && serve_a.files.empty()) throw UsageError("serve needs --index or --corpus");
    if (serve_budgets.empty() && serve_a.files.empty()) throw UsageError("serve needs --budgets or --corpus");

    std::optional<Dataset> corpus;
    if (!serve_a.files.empty()) corpus = load(serve_a).dataset;
    const auto index = serve_index.empty()
                           ? std::make_shared<const KnnIndex>(KnnIndex::build(*corpus, kDefaultNeighbors))
                           : read_index(serve_index);
    auto table = serve_budgets.empty() ? compute_ink_budgets(*corpus, cfg.room.match.ink_multiplier)
                                       : read_budgets(serve_budgets).with_multiplier(cfg.room.match.ink_multiplier);

    server::RoomRegistry registry(index, std::move(table), cfg);
    server::WsServerOptions opts;
    std::tie(opts.host, opts.port) = split_bind(bind);
    opts.static_root = static_dir;

    // Block termination signals here so the waiter thread alone receives them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    server::WsServer ws(registry, opts);
    std::cout << "listening on " << opts.host << ":" << ws.port() << " (ws path /ws)" << std::endl;
    std::thread waiter([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      ws.stop();
    });
    ws.run();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return 0;
  }

  if (simulate->parsed()) {
    const auto cfg = config_of(sim_c);
    if (sim_a.files.empty()) throw UsageError("simulate needs --corpus");
    sim::SimulationOptions opt;
    opt.trials = trials;
    opt.seed = sim_c.seed;
    opt.threshold = sim_threshold.value_or(cfg.room.match.confidence_threshold);
    opt.masking = !no_mask;
    opt.strategies.clear();
    try {
      for (const auto& s : strategies) opt.strategies.push_back(sim::parse_strategy(s));
    } catch (const ArgumentError& e) {
      throw UsageError(e.what());
    }
    if (opt.threshold < 0.0 || opt.threshold > 1.0) throw UsageError("--threshold must be within [0, 1]");

    const auto corpus = load(sim_a).dataset;
    const auto index = sim_index.empty()
                           ? std::make_shared<const KnnIndex>(KnnIndex::build(corpus, kDefaultNeighbors))
                           : read_index(sim_index);
    const auto table = sim_budgets.empty() ? compute_ink_budgets(corpus, cfg.room.match.ink_multiplier)
                                           : read_budgets(sim_budgets);
    std::vector<LabeledDrawing> examples;
    for (std::size_t i = 0; i < corpus.categories().size(); ++i) {
      const auto& ex = corpus.examples(i);
      examples.insert(examples.end(), ex.begin(), ex.end());
    }
    const auto report = sim::simulate(*index, table, examples, opt);
    if (!sim_c.out.empty()) {
      Sink sink(sim_c.out);
      sim::write_report(report, sink.stream());
      sink.finish(sim_c.out);
    }
    sim::write_summary(report, std::cout);
    return 0;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "innk: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "innk: " << e.what() << "\n";
    return kExitRuntime;
  }
}
