/*
 * Copyright 2026 The ppsf Authors
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

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "ppsf/dimreduce.hpp"
#include "ppsf/session.hpp"
#include "ppsf/synth.hpp"
#include "ppsf/transport.hpp"

namespace {

using namespace ppsf;

constexpr unsigned kInsecureFloorBits = 1024;

struct CommonOptions {
  unsigned bits = 256;
  std::uint64_t scale_c = 1000000;
  std::uint64_t seed = 1;
  bool allow_insecure = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--bits", opts.bits, "Key size in bits")->capture_default_str();
  cmd->add_option("--scale-c", opts.scale_c, "Fixed-point scale constant C")
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Master seed; all randomness derives from it")
      ->capture_default_str();
  cmd->add_flag("--allow-insecure-keys", opts.allow_insecure,
                "Permit key sizes below " + std::to_string(kInsecureFloorBits) +
                    " bits (toy/benchmark use)");
}

void check_key_guard(const CommonOptions& opts) {
  if (opts.bits < kInsecureFloorBits && !opts.allow_insecure) {
    throw CLI::ValidationError(
        "--bits", std::to_string(opts.bits) + " bits is below the security floor of " +
                      std::to_string(kInsecureFloorBits) +
                      "; pass --allow-insecure-keys to proceed deliberately");
  }
}

struct DataOptions {
  std::string corpus_dir;
  std::string labels_file;
  std::string synthetic;  // docs,dim,features_per_doc,correlation
  std::size_t prefix_limit = kDefaultPrefixLimit;
  std::uint64_t hash_space = kDefaultHashSpace;
};

LabeledDataset load_data(const DataOptions& opts, std::uint64_t seed = 1);

void add_data(CLI::App* cmd, DataOptions& opts) {
  cmd->add_option("--corpus", opts.corpus_dir, "Directory of message files");
  cmd->add_option("--labels", opts.labels_file,
                  "labels.tsv file of filename<TAB>spam|ham lines");
  cmd->add_option("--synthetic", opts.synthetic,
                  "Synthetic corpus docs,dim,features_per_doc,correlation");
  cmd->add_option("--prefix-limit", opts.prefix_limit,
                  "Bytes of each document to read")
      ->capture_default_str();
  cmd->add_option("--hash-space", opts.hash_space, "4-gram hash space size")
      ->capture_default_str();
}

LabeledDataset load_data(const DataOptions& opts, std::uint64_t seed) {
  if (!opts.synthetic.empty()) {
    std::size_t docs = 0;
    std::uint64_t dim = 0;
    unsigned per_doc = 0;
    double corr = 0.0;
    char c1, c2, c3;
    std::istringstream is(opts.synthetic);
    if (!(is >> docs >> c1 >> dim >> c2 >> per_doc >> c3 >> corr) || c1 != ',' ||
        c2 != ',' || c3 != ',') {
      throw CLI::ValidationError("--synthetic",
                                 "expected docs,dim,features_per_doc,correlation");
    }
    return make_synthetic_corpus(docs, dim, per_doc, corr, seed + 9000);
  }
  if (opts.corpus_dir.empty() || opts.labels_file.empty()) {
    throw CLI::ValidationError("--corpus", "need --corpus and --labels, or --synthetic");
  }
  auto [data, manifest] =
      ingest_corpus(opts.corpus_dir, opts.labels_file, opts.prefix_limit, opts.hash_space);
  std::cerr << "ingested " << data.size() << " documents (" << manifest.spam_count
            << " spam, " << manifest.ham_count << " ham), dim " << data.dim << "\n";
  return data;
}

void write_timing_csv(const std::string& path, const StepTimings& t,
                      const std::string& provenance) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# " << provenance << "\n";
  out << "step_group,seconds\n";
  out << "1," << t.send_weights << "\n";
  out << "\"2,3\"," << t.blind_margins << "\n";
  out << "\"4,5\"," << t.exponentiate << "\n";
  out << "\"6,7\"," << t.unblind_scale << "\n";
  out << "8," << t.reciprocal << "\n";
  out << "\"9,10\"," << t.assemble_gradient << "\n";
  out << "11," << t.apply_update << "\n";
}

void print_report(const TrainReport& report) {
  if (report.aborted) {
    std::cout << "session ABORTED: " << report.abort_reason << "\n";
    return;
  }
  std::cout << "rounds completed: " << report.rounds_completed << "\n";
  std::cout << "crypto operations: " << report.counters.crypto_total() << " ("
            << report.counters.encryptions << " enc, " << report.counters.decryptions
            << " dec)\n";
  std::cout << "elements transmitted: " << report.counters.transmitted_total() << " ("
            << report.counters.elements_to_model_owner << " to model owner, "
            << report.counters.elements_to_data_owner << " to data owner)\n";
  const StepTimings& t = report.timings;
  std::cout << "step timings (s): 1=" << t.send_weights << "  2,3=" << t.blind_margins
            << "  4,5=" << t.exponentiate << "  6,7=" << t.unblind_scale
            << "  8=" << t.reciprocal << "  9,10=" << t.assemble_gradient
            << "  11=" << t.apply_update << "\n";
}

std::pair<std::string, std::uint16_t> parse_host_port(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) {
    throw CLI::ValidationError("--connect", "expected host:port");
  }
  return {addr.substr(0, colon),
          static_cast<std::uint16_t>(std::stoul(addr.substr(colon + 1)))};
}

int cmd_keygen(const CommonOptions& common, const std::string& pub_path,
               const std::string& priv_path) {
  check_key_guard(common);
  Rng rng = Rng::seeded(common.seed).derive("keygen-cli");
  const KeyPair keys = keygen(common.bits, rng);
  const auto write = [](const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  };
  write(pub_path, serialize_public_key(keys.pub));
  write(priv_path, serialize_private_key(keys.priv));
  std::cout << "wrote " << common.bits << "-bit key pair: " << pub_path << ", "
            << priv_path << "\n";
  return 0;
}

struct TrainOptions {
  CommonOptions common;
  DataOptions data;
  TrainingConfig config;
  std::uint64_t q_domain = 32;
  unsigned rounds = 1;
  bool online = false;
  std::string transport = "inproc";
  std::string role = "both";
  std::uint16_t listen_port = 0;
  std::string connect_addr;
  std::uint64_t dim = 0;  // model owner without local data
  std::string model_out;
  std::string timing_csv;
};

int cmd_train(TrainOptions& opts) {
  check_key_guard(opts.common);
  opts.config.key_bits = opts.common.bits;
  opts.config.scale_constant = BigInt(static_cast<long>(opts.common.scale_c));
  opts.config.q_domain = BigInt(static_cast<long>(opts.q_domain));
  opts.config.check_feasible();

  if (opts.online && opts.config.block_size == 1) {
    std::cerr << "warning: block size 1 hands the model owner a scaled copy of each "
                 "document vector; use larger blocks to limit per-document leakage\n";
  }

  TrainReport report;
  if (opts.transport == "inproc") {
    const LabeledDataset data = load_data(opts.data, opts.common.seed);
    report = train_private_inproc(opts.config, data, opts.rounds, opts.online,
                                  opts.common.seed);
  } else if (opts.role == "bob") {
    if (opts.dim == 0) {
      throw CLI::ValidationError("--dim", "model owner needs --dim for a socket session");
    }
    SocketServer server(opts.listen_port);
    std::cerr << "model owner listening on 127.0.0.1:" << server.port() << "\n";
    auto channel = server.accept_one();
    report = run_training_model_owner(*channel, opts.config, opts.dim, opts.common.seed);
  } else if (opts.role == "alice") {
    const LabeledDataset data = load_data(opts.data, opts.common.seed);
    const auto [host, port] = parse_host_port(opts.connect_addr);
    auto channel = SocketChannel::connect_to(host, port);
    report = run_training_data_owner(*channel, opts.config, data, opts.rounds,
                                     opts.online, opts.common.seed);
  } else {
    throw CLI::ValidationError("--role", "socket transport needs --role alice or bob");
  }

  print_report(report);
  if (!report.aborted && !opts.model_out.empty() && opts.role != "alice") {
    save_model(report.model, opts.model_out);
    std::cout << "model written to " << opts.model_out << "\n";
  }
  if (!opts.timing_csv.empty()) {
    std::ostringstream provenance;
    provenance << "ppsf train bits=" << opts.common.bits << " C=" << opts.common.scale_c
               << " eta=" << opts.config.eta << " lambda=" << opts.config.reg_lambda
               << " K=" << opts.config.block_size << " R=" << opts.config.blind_bound
               << " qdomain=" << opts.q_domain << " seed=" << opts.common.seed
               << " rounds=" << report.rounds_completed;
    write_timing_csv(opts.timing_csv, report.timings, provenance.str());
  }
  return report.aborted ? 1 : 0;
}

int cmd_train_plain(const DataOptions& data_opts, double eta, double lambda,
                    std::uint64_t block, bool online, unsigned iters, double tol,
                    const std::string& model_out) {
  const LabeledDataset data = load_data(data_opts);
  const Model model = online ? train_online(data, block, eta, lambda)
                             : train_batch(data, eta, lambda, tol, iters);
  std::cout << "log-likelihood: " << log_likelihood(model.weights, data) << "\n";
  std::vector<double> scores(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    scores[i] = margin(model.weights, data.instances[i]);
  }
  std::cout << "training AUC: " << auc(scores, data.labels) << "\n";
  if (!model_out.empty()) {
    save_model(model, model_out);
    std::cout << "model written to " << model_out << "\n";
  }
  return 0;
}

SparseBinaryVector load_document(const std::string& path, std::uint64_t dim,
                                 std::size_t prefix_limit,
                                 const std::string& reduce_state_path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open document " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (!reduce_state_path.empty()) {
    std::ifstream state_in(reduce_state_path, std::ios::binary);
    if (!state_in) throw std::runtime_error("cannot open " + reduce_state_path);
    std::vector<std::uint8_t> state_bytes((std::istreambuf_iterator<char>(state_in)),
                                          std::istreambuf_iterator<char>());
    const ProjectionState state = parse_projection(state_bytes);
    const auto raw = extract_fourgrams(bytes, prefix_limit, state.spec.source_dim);
    LabeledDataset wrapper;
    wrapper.dim = raw.dim;
    wrapper.instances = {raw};
    wrapper.labels = {1};
    return apply_reduction(state, wrapper).instances[0];
  }
  return extract_fourgrams(bytes, prefix_limit, dim);
}

struct EvalOptions {
  CommonOptions common;
  std::string model_path;
  std::string doc_path;
  std::string reduce_state;
  std::size_t prefix_limit = kDefaultPrefixLimit;
  double margin_bound = 32.0;
  unsigned reps = 1;
  std::string transport = "inproc";
  std::string role = "both";
  std::uint16_t listen_port = 0;
  std::string connect_addr;
};

int cmd_eval(EvalOptions& opts) {
  check_key_guard(opts.common);
  EvalConfig config;
  config.key_bits = opts.common.bits;
  config.scale_constant = BigInt(static_cast<long>(opts.common.scale_c));
  config.margin_bound = opts.margin_bound;

  if (opts.transport == "socket" && opts.role == "bob") {
    const Model model = load_model(opts.model_path);
    SocketServer server(opts.listen_port);
    std::cerr << "evaluation endpoint on 127.0.0.1:" << server.port() << "\n";
    auto channel = server.accept_one();
    run_eval_model_owner(*channel, config, model, opts.common.seed);
    return 0;
  }

  const Model model = load_model(opts.model_path);
  const SparseBinaryVector x =
      load_document(opts.doc_path, model.dim(), opts.prefix_limit, opts.reduce_state);

  if (opts.transport == "socket") {
    const auto [host, port] = parse_host_port(opts.connect_addr);
    auto channel = SocketChannel::connect_to(host, port);
    const EvalReport report = run_eval_data_owner(*channel, config, x, opts.common.seed);
    if (report.aborted) {
      std::cout << "evaluation ABORTED: " << report.abort_reason << "\n";
      return 1;
    }
    std::cout << "label: " << report.label << (report.label > 0 ? " (spam)" : " (ham)")
              << "  [" << report.seconds << " s]\n";
    return 0;
  }

  // In-process; --reps > 1 reuses the cached encrypted weights.
  Rng bob_root = Rng::seeded(opts.common.seed).derive("eval-model-owner");
  Rng key_rng = bob_root.derive("keygen");
  KeyPair keys = keygen(config.key_bits, key_rng);
  BobEvaluator bob(keys, config, model.weights, bob_root.derive("session"));
  CarolEvaluator carol(bob.public_key(), config,
                       Rng::seeded(opts.common.seed).derive("eval-data-owner"));
  int label = 0;
  std::uint64_t prev_enc = 0;
  for (unsigned rep = 0; rep < opts.reps; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProtocolMessage weights = bob.weights_message();
    bob.on_blinded_product(carol.on_weights(weights, x));
    const ProtocolMessage response = bob.on_compare_bits(carol.bits_message());
    bob.on_result(carol.on_compare_response(response));
    label = carol.label();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::uint64_t enc_now = bob.counters().encryptions + carol.counters().encryptions;
    std::cout << "rep " << rep + 1 << ": label " << label
              << (label > 0 ? " (spam)" : " (ham)") << ", encryptions this call "
              << enc_now - prev_enc << ", " << seconds << " s\n";
    prev_enc = enc_now;
  }
  return 0;
}

int cmd_features(const std::string& doc_path, std::size_t prefix_limit,
                 std::uint64_t hash_space) {
  std::ifstream in(doc_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open document " + doc_path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  const auto v = extract_fourgrams(bytes, prefix_limit, hash_space);
  std::cout << dump_vectors({v});
  return 0;
}

int cmd_reduce(const DataOptions& data_opts, const std::string& method,
               std::uint64_t target_dim, std::uint64_t seed, std::uint64_t df_threshold,
               std::uint64_t hash_modulus, const std::string& state_out,
               const std::string& dump_out) {
  const LabeledDataset data = load_data(data_opts);
  ReductionSpec spec;
  spec.method = reduce_method_from_string(method);
  spec.source_dim = data.dim;
  spec.target_dim = target_dim;
  spec.seed = seed;
  spec.df_threshold = df_threshold;
  spec.hash_modulus = hash_modulus;

  ProjectionState state;
  switch (spec.method) {
    case ReduceMethod::kDfPrune:
    case ReduceMethod::kUniform:
    case ReduceMethod::kMultinomial:
      state = fit_selection(spec, data);
      break;
    case ReduceMethod::kLsh:
    case ReduceMethod::kHashSpace:
      state.spec = spec;  // stateless beyond the spec
      break;
    case ReduceMethod::kPca: {
      std::vector<std::vector<double>> rows(data.size(),
                                            std::vector<double>(data.dim, 0.0));
      for (std::size_t i = 0; i < data.size(); ++i) {
        for (auto idx : data.instances[i].indices) rows[i][idx] = 1.0;
      }
      state = pca_fit(rows, target_dim, seed);
      break;
    }
  }

  if (!state_out.empty()) {
    const auto bytes = serialize_projection(state);
    std::ofstream out(state_out, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    std::cout << "projection state written to " << state_out << "\n";
  }
  if (!dump_out.empty()) {
    if (spec.method == ReduceMethod::kPca) {
      throw std::runtime_error("pca has no sparse dump; it is excluded from protocol data");
    }
    const LabeledDataset reduced = apply_reduction(state, data);
    std::ofstream out(dump_out);
    out << dump_vectors(reduced.instances);
    std::cout << "reduced vectors (dim " << reduced.dim << ") written to " << dump_out
              << "\n";
  }
  return 0;
}

struct BenchOptions {
  CommonOptions common;
  std::string methods = "multinomial,lsh,hashspace,uniform";
  std::string dims = "64,256";
  std::string blocks = "10,100";
  std::string bits_list;
  std::size_t docs = 400;
  std::uint64_t source_dim = 2000;
  unsigned features_per_doc = 60;
  double correlation = 0.9;
  std::string out_csv = "bench.csv";
};

std::vector<std::uint64_t> parse_list(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::istringstream is(csv);
  std::string token;
  while (std::getline(is, token, ',')) {
    if (!token.empty()) out.push_back(std::stoull(token));
  }
  return out;
}

std::vector<std::string> parse_names(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream is(csv);
  std::string token;
  while (std::getline(is, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

int cmd_bench(BenchOptions& opts) {
  check_key_guard(opts.common);
  const auto methods = parse_names(opts.methods);
  const auto dims = parse_list(opts.dims);
  const auto blocks = parse_list(opts.blocks);
  auto bits_values = parse_list(opts.bits_list);
  if (bits_values.empty()) bits_values = {opts.common.bits};
  if (methods.empty() || dims.empty() || blocks.empty()) {
    throw CLI::ValidationError("--methods", "empty benchmark grid");
  }

  const LabeledDataset full =
      make_synthetic_corpus(opts.docs * 2, opts.source_dim, opts.features_per_doc,
                            opts.correlation, opts.common.seed + 17);
  LabeledDataset train_full, held_full;
  train_full.dim = held_full.dim = full.dim;
  for (std::size_t i = 0; i < full.size(); ++i) {
    auto& part = i < opts.docs ? train_full : held_full;
    part.instances.push_back(full.instances[i]);
    part.labels.push_back(full.labels[i]);
  }

  std::ofstream out(opts.out_csv);
  if (!out) throw std::runtime_error("cannot open " + opts.out_csv);
  out << "# ppsf bench docs=" << opts.docs << " source_dim=" << opts.source_dim
      << " features_per_doc=" << opts.features_per_doc
      << " correlation=" << opts.correlation << " seed=" << opts.common.seed
      << " scale_c=" << opts.common.scale_c << "\n";
  out << "method,dim,block,bits,seconds,auc,encryptions,decryptions,elements,status\n";

  for (const auto& method : methods) {
    for (std::uint64_t dim : dims) {
      for (std::uint64_t block : blocks) {
        for (std::uint64_t bits : bits_values) {
          out << method << ',' << dim << ',' << block << ',' << bits << ',';
          try {
            ReductionSpec spec;
            spec.method = reduce_method_from_string(method);
            spec.source_dim = full.dim;
            spec.target_dim = dim;
            spec.seed = opts.common.seed + dim;
            spec.hash_modulus = dim;
            ProjectionState state;
            if (spec.method == ReduceMethod::kDfPrune ||
                spec.method == ReduceMethod::kUniform ||
                spec.method == ReduceMethod::kMultinomial) {
              state = fit_selection(spec, train_full);
            } else if (spec.method == ReduceMethod::kPca) {
              throw std::runtime_error("pca excluded from private benchmarks");
            } else {
              state.spec = spec;
            }
            const LabeledDataset train = apply_reduction(state, train_full);
            const LabeledDataset held = apply_reduction(state, held_full);

            TrainingConfig config;
            config.key_bits = static_cast<unsigned>(bits);
            config.scale_constant = BigInt(static_cast<long>(opts.common.scale_c));
            config.block_size = block;

            const auto t0 = std::chrono::steady_clock::now();
            const TrainReport report =
                train_private_inproc(config, train, 0, true, opts.common.seed + block);
            const double seconds = std::chrono::duration<double>(
                std::chrono::steady_clock::now() - t0).count();
            if (report.aborted) throw std::runtime_error(report.abort_reason);

            std::vector<double> scores(held.size());
            for (std::size_t i = 0; i < held.size(); ++i) {
              scores[i] = margin(report.model.weights, held.instances[i]);
            }
            const double held_auc = auc(scores, held.labels);
            out << seconds << ',' << held_auc << ',' << report.counters.encryptions
                << ',' << report.counters.decryptions << ','
                << report.counters.transmitted_total() << ",ok\n";
            std::cerr << method << " dim=" << dim << " K=" << block << " b=" << bits
                      << ": " << seconds << " s, AUC " << held_auc << "\n";
          } catch (const std::exception& e) {
            out << ",,,,\"" << e.what() << "\"\n";
            std::cerr << method << " dim=" << dim << " K=" << block << " b=" << bits
                      << ": error: " << e.what() << "\n";
          }
          out.flush();
        }
      }
    }
  }
  std::cout << "benchmark grid written to " << opts.out_csv << "\n";
  return 0;
}

int cmd_inspect(const std::string& model_path) {
  const Model model = load_model(model_path);
  double norm = 0.0, min_w = 1e300, max_w = -1e300;
  for (double w : model.weights) {
    norm += w * w;
    min_w = std::min(min_w, w);
    max_w = std::max(max_w, w);
  }
  std::cout << "dim: " << model.dim() << "\neta: " << model.eta
            << "\nreg_lambda: " << model.reg_lambda << "\n|w|_2: " << std::sqrt(norm)
            << "\nmin/max: " << min_w << " / " << max_w << "\n";
  std::vector<std::size_t> order(model.weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(8, order.size()),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      return std::fabs(model.weights[a]) > std::fabs(model.weights[b]);
                    });
  std::cout << "largest |w| coordinates:";
  for (std::size_t i = 0; i < std::min<std::size_t>(8, order.size()); ++i) {
    std::cout << "  " << order[i] << ":" << model.weights[order[i]];
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving spam filter: training and evaluation over "
               "homomorphically encrypted data"};
  app.set_config("--config", "", "Flat key=value config file; flags override");
  app.require_subcommand(1);

  // keygen
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair");
  CommonOptions keygen_common;
  std::string pub_path = "ppsf_public.key", priv_path = "ppsf_private.key";
  add_common(keygen_cmd, keygen_common);
  keygen_cmd->add_option("--public", pub_path, "Public key output")->capture_default_str();
  keygen_cmd->add_option("--private", priv_path, "Private key output")
      ->capture_default_str();

  // train
  auto* train_cmd = app.add_subcommand("train", "Private training session");
  TrainOptions train_opts;
  add_common(train_cmd, train_opts.common);
  add_data(train_cmd, train_opts.data);
  train_cmd->add_option("--eta", train_opts.config.eta, "Step size")->capture_default_str();
  train_cmd->add_option("--lambda", train_opts.config.reg_lambda, "l2 coefficient")
      ->capture_default_str();
  train_cmd->add_option("--block-size", train_opts.config.block_size,
                        "Instances per online update (K)")
      ->capture_default_str();
  train_cmd->add_option("--blind-bound", train_opts.config.blind_bound,
                        "Additive blind range R")
      ->capture_default_str();
  train_cmd->add_option("--q-domain", train_opts.q_domain,
                        "Multiplicative blind domain size")
      ->capture_default_str();
  train_cmd->add_option("--margin-bound", train_opts.config.margin_bound,
                        "Abort threshold on |y w.x|")
      ->capture_default_str();
  train_cmd->add_option("--convergence-tol", train_opts.config.convergence_tol,
                        "Batch mode: stop once the weight change falls below this "
                        "(0 = run all rounds)")
      ->capture_default_str();
  train_cmd->add_option("--rounds", train_opts.rounds, "Batch rounds")
      ->capture_default_str();
  train_cmd->add_flag("--online", train_opts.online, "One pass in blocks of K");
  train_cmd->add_option("--transport", train_opts.transport, "inproc or socket")
      ->check(CLI::IsMember({"inproc", "socket"}))
      ->capture_default_str();
  train_cmd->add_option("--role", train_opts.role, "both (inproc), alice, or bob")
      ->check(CLI::IsMember({"both", "alice", "bob"}))
      ->capture_default_str();
  train_cmd->add_option("--listen", train_opts.listen_port, "Port for --role bob (0 = any)");
  train_cmd->add_option("--connect", train_opts.connect_addr, "host:port for --role alice");
  train_cmd->add_option("--dim", train_opts.dim, "Model dimension (socket model owner)");
  train_cmd->add_option("--model-out", train_opts.model_out, "Write the trained model");
  train_cmd->add_option("--timing-csv", train_opts.timing_csv,
                        "Per-step timing CSV output");

  // train-plain
  auto* plain_cmd = app.add_subcommand("train-plain", "Plaintext reference training");
  DataOptions plain_data;
  double plain_eta = 0.001, plain_lambda = 0.0, plain_tol = 1e-8;
  std::uint64_t plain_block = 100;
  unsigned plain_iters = 100;
  bool plain_online = false;
  std::string plain_model_out;
  add_data(plain_cmd, plain_data);
  plain_cmd->add_option("--eta", plain_eta, "Step size")->capture_default_str();
  plain_cmd->add_option("--lambda", plain_lambda, "l2 coefficient")->capture_default_str();
  plain_cmd->add_option("--block-size", plain_block, "Online block size")
      ->capture_default_str();
  plain_cmd->add_option("--iters", plain_iters, "Max batch iterations")
      ->capture_default_str();
  plain_cmd->add_option("--tol", plain_tol, "Convergence tolerance")->capture_default_str();
  plain_cmd->add_flag("--online", plain_online, "Online single pass");
  plain_cmd->add_option("--model-out", plain_model_out, "Write the trained model");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Private classification of one document");
  EvalOptions eval_opts;
  add_common(eval_cmd, eval_opts.common);
  eval_cmd->add_option("--model", eval_opts.model_path, "Model file")->required();
  eval_cmd->add_option("--doc", eval_opts.doc_path, "Document to classify");
  eval_cmd->add_option("--reduce-state", eval_opts.reduce_state,
                       "Projection state for reduced models");
  eval_cmd->add_option("--prefix-limit", eval_opts.prefix_limit, "Bytes of document read")
      ->capture_default_str();
  eval_cmd->add_option("--margin-bound", eval_opts.margin_bound,
                       "Comparison range: largest |w.x| supported")
      ->capture_default_str();
  eval_cmd->add_option("--reps", eval_opts.reps,
                       "Repeat count; later calls reuse cached E[w]")
      ->capture_default_str();
  eval_cmd->add_option("--transport", eval_opts.transport, "inproc or socket")
      ->check(CLI::IsMember({"inproc", "socket"}))
      ->capture_default_str();
  eval_cmd->add_option("--role", eval_opts.role, "both (inproc), carol, or bob")
      ->check(CLI::IsMember({"both", "carol", "bob"}))
      ->capture_default_str();
  eval_cmd->add_option("--listen", eval_opts.listen_port, "Port for --role bob");
  eval_cmd->add_option("--connect", eval_opts.connect_addr, "host:port for --role carol");

  // features
  auto* features_cmd = app.add_subcommand("features", "Extract 4-gram indices");
  std::string features_doc;
  std::size_t features_prefix = kDefaultPrefixLimit;
  std::uint64_t features_space = kDefaultHashSpace;
  features_cmd->add_option("--doc", features_doc, "Document file")->required();
  features_cmd->add_option("--prefix-limit", features_prefix, "Bytes of document read")
      ->capture_default_str();
  features_cmd->add_option("--hash-space", features_space, "Hash space size")
      ->capture_default_str();

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "Fit/apply dimensionality reduction");
  DataOptions reduce_data;
  std::string reduce_method = "multinomial";
  std::uint64_t reduce_dim = 10000, reduce_seed = 1, reduce_df = 1, reduce_modulus = 0;
  std::string state_out, dump_out;
  add_data(reduce_cmd, reduce_data);
  reduce_cmd->add_option("--method", reduce_method,
                         "lsh|hashspace|dfprune|uniform|multinomial|pca")
      ->capture_default_str();
  reduce_cmd->add_option("--target-dim", reduce_dim, "Reduced dimension k")
      ->capture_default_str();
  reduce_cmd->add_option("--reduce-seed", reduce_seed, "Reduction seed")
      ->capture_default_str();
  reduce_cmd->add_option("--df-threshold", reduce_df, "dfprune threshold")
      ->capture_default_str();
  reduce_cmd->add_option("--hash-modulus", reduce_modulus, "hashspace modulus");
  reduce_cmd->add_option("--state-out", state_out, "Projection state output");
  reduce_cmd->add_option("--dump-out", dump_out, "Reduced vector dump output");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Grid benchmark to CSV");
  BenchOptions bench_opts;
  add_common(bench_cmd, bench_opts.common);
  bench_cmd->add_option("--methods", bench_opts.methods, "Comma-separated methods")
      ->capture_default_str();
  bench_cmd->add_option("--dims", bench_opts.dims, "Comma-separated target dims")
      ->capture_default_str();
  bench_cmd->add_option("--blocks", bench_opts.blocks, "Comma-separated block sizes")
      ->capture_default_str();
  bench_cmd->add_option("--bits-list", bench_opts.bits_list,
                        "Comma-separated key sizes (default: --bits)");
  bench_cmd->add_option("--docs", bench_opts.docs, "Training documents")
      ->capture_default_str();
  bench_cmd->add_option("--source-dim", bench_opts.source_dim, "Pre-reduction dimension")
      ->capture_default_str();
  bench_cmd->add_option("--features-per-doc", bench_opts.features_per_doc,
                        "Synthetic density")
      ->capture_default_str();
  bench_cmd->add_option("--correlation", bench_opts.correlation, "Synthetic separability")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_opts.out_csv, "CSV output path")
      ->capture_default_str();

  // inspect-model
  auto* inspect_cmd = app.add_subcommand("inspect-model", "Print model summary");
  std::string inspect_path;
  inspect_cmd->add_option("--model", inspect_path, "Model file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (keygen_cmd->parsed()) return cmd_keygen(keygen_common, pub_path, priv_path);
    if (train_cmd->parsed()) return cmd_train(train_opts);
    if (plain_cmd->parsed()) {
      return cmd_train_plain(plain_data, plain_eta, plain_lambda, plain_block,
                             plain_online, plain_iters, plain_tol, plain_model_out);
    }
    if (eval_cmd->parsed()) return cmd_eval(eval_opts);
    if (features_cmd->parsed()) {
      return cmd_features(features_doc, features_prefix, features_space);
    }
    if (reduce_cmd->parsed()) {
      return cmd_reduce(reduce_data, reduce_method, reduce_dim, reduce_seed, reduce_df,
                        reduce_modulus, state_out, dump_out);
    }
    if (bench_cmd->parsed()) return cmd_bench(bench_opts);
    if (inspect_cmd->parsed()) return cmd_inspect(inspect_path);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
