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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "ppsf/session.hpp"
#include "ppsf/synth.hpp"
#include "ppsf/transport.hpp"
#include "testutil.hpp"

using namespace ppsf;

namespace {

TrainingConfig unit_config() {
  TrainingConfig config;
  config.key_bits = 128;
  config.scale_constant = BigInt(100000);
  config.eta = 0.01;
  config.block_size = 10;
  config.blind_bound = 2.0;
  config.q_domain = BigInt(16);
  config.margin_bound = 8.0;
  return config;
}

}  // namespace

TEST_CASE("inproc channel pair delivers frames in order") {
  auto [a, b] = make_inproc_pair();
  ProtocolMessage msg;
  msg.type = MsgType::kControl;
  msg.payload = encode_control({"ping", {1, 2, 3}});
  a->send(msg);
  ProtocolMessage msg2 = msg;
  msg2.payload = encode_control({"pong", {}});
  a->send(msg2);
  CHECK(b->recv() == msg);
  CHECK(b->recv() == msg2);
}

TEST_CASE("frame size limits are enforced on both directions") {
  auto [a, b] = make_inproc_pair();
  a->set_max_frame(64);
  b->set_max_frame(64);
  ProtocolMessage big;
  big.type = MsgType::kControl;
  std::vector<std::uint8_t> blob(1000, 7);
  big.payload = encode_control({"big", blob});
  CHECK_THROWS_AS(a->send(big), ProtocolError);

  // Oversized frame arriving at a small-limit receiver.
  auto [c, d] = make_inproc_pair();
  c->send(big);
  d->set_max_frame(64);
  CHECK_THROWS_AS((void)d->recv(), ProtocolError);
}

TEST_CASE("socket channel round-trips messages over loopback") {
  SocketServer server(0);
  std::unique_ptr<SocketChannel> bob_side;
  std::thread accepter([&] { bob_side = server.accept_one(); });
  auto carol_side = SocketChannel::connect_to("127.0.0.1", server.port());
  accepter.join();

  ProtocolMessage msg;
  msg.type = MsgType::kControl;
  msg.payload = encode_control({"hello", {9, 9}});
  carol_side->send(msg);
  CHECK(bob_side->recv() == msg);
  bob_side->send(msg);
  CHECK(carol_side->recv() == msg);
}

TEST_CASE("transport equivalence: identical models and counters per seed") {
  const TrainingConfig config = unit_config();
  const LabeledDataset data = make_synthetic_corpus(20, 6, 2, 0.9, 400);
  const std::uint64_t seed = 777;
  const unsigned rounds = 2;

  const TrainReport inproc = train_private_inproc(config, data, rounds, false, seed);
  REQUIRE_FALSE(inproc.aborted);

  // Same session over a real socket, two threads.
  SocketServer server(0);
  TrainReport bob_report;
  std::thread bob_thread([&] {
    auto channel = server.accept_one();
    bob_report = run_training_model_owner(*channel, config, data.dim, seed);
  });
  auto alice_channel = SocketChannel::connect_to("127.0.0.1", server.port());
  const TrainReport alice_report =
      run_training_data_owner(*alice_channel, config, data, rounds, false, seed);
  bob_thread.join();

  REQUIRE_FALSE(bob_report.aborted);
  REQUIRE_FALSE(alice_report.aborted);
  CHECK(bob_report.model.weights == inproc.model.weights);
  CHECK(bob_report.counters + alice_report.counters == inproc.counters);
  CHECK(bob_report.rounds_completed == rounds);
}

TEST_CASE("online mode over sockets matches inproc online") {
  TrainingConfig config = unit_config();
  config.block_size = 7;
  const LabeledDataset data = make_synthetic_corpus(20, 6, 2, 0.9, 401);
  const std::uint64_t seed = 888;

  const TrainReport inproc = train_private_inproc(config, data, 0, true, seed);

  SocketServer server(0);
  TrainReport bob_report;
  std::thread bob_thread([&] {
    auto channel = server.accept_one();
    bob_report = run_training_model_owner(*channel, config, data.dim, seed);
  });
  auto alice_channel = SocketChannel::connect_to("127.0.0.1", server.port());
  const TrainReport alice_report =
      run_training_data_owner(*alice_channel, config, data, 0, true, seed);
  bob_thread.join();

  REQUIRE_FALSE(bob_report.aborted);
  CHECK(bob_report.model.weights == inproc.model.weights);
  CHECK(bob_report.rounds_completed == inproc.rounds_completed);
}

TEST_CASE("handshake mismatch aborts both sides cleanly") {
  const TrainingConfig bob_config = unit_config();
  TrainingConfig alice_config = bob_config;
  alice_config.scale_constant = BigInt(999);  // disagrees

  const LabeledDataset data = make_synthetic_corpus(6, 4, 1, 0.9, 402);
  SocketServer server(0);
  TrainReport bob_report;
  std::thread bob_thread([&] {
    auto channel = server.accept_one();
    bob_report = run_training_model_owner(*channel, bob_config, data.dim, 11);
  });
  auto alice_channel = SocketChannel::connect_to("127.0.0.1", server.port());
  const TrainReport alice_report =
      run_training_data_owner(*alice_channel, alice_config, data, 1, false, 11);
  bob_thread.join();

  CHECK(alice_report.aborted);
  CHECK(bob_report.aborted);
  CHECK(bob_report.rounds_completed == 0);
}

TEST_CASE("a corrupt frame mid-session aborts both sides, nothing after") {
  const TrainingConfig config = unit_config();
  SocketServer server(0);
  TrainReport bob_report;
  std::thread bob_thread([&] {
    auto channel = server.accept_one();
    bob_report = run_training_model_owner(*channel, config, 4, 21);
  });
  auto channel = SocketChannel::connect_to("127.0.0.1", server.port());

  const ProtocolMessage handshake = channel->recv();
  REQUIRE(handshake.type == MsgType::kHandshake);
  ProtocolMessage ok;
  ok.session_id = handshake.session_id;
  ok.type = MsgType::kControl;
  ok.payload = encode_control({"handshake-ok", {}});
  channel->send(ok);

  const ProtocolMessage weights = channel->recv();
  REQUIRE(weights.type == MsgType::kEncVector);

  // Well-framed but undecodable margins payload.
  ProtocolMessage garbage;
  garbage.session_id = handshake.session_id;
  garbage.type = MsgType::kEncScalars;
  garbage.payload = {0xff, 0xff, 0xff};
  channel->send(garbage);

  const ProtocolMessage reply = channel->recv();
  CHECK(reply.type == MsgType::kAbort);
  bob_thread.join();
  CHECK(bob_report.aborted);
  CHECK(bob_report.rounds_completed == 0);
}

TEST_CASE("evaluation session over sockets matches plaintext") {
  EvalConfig config;
  config.key_bits = 128;
  config.scale_constant = BigInt(100000);
  config.margin_bound = 8.0;

  Rng rng = Rng::seeded(403);
  std::vector<double> w(6);
  for (auto& v : w) v = rng.uniform(-0.5, 0.5);
  const Model model{w, 0.001, 0.0};
  const SparseBinaryVector x = testutil::random_sparse(rng, 6, 3);

  SocketServer server(0);
  std::thread bob_thread([&] {
    auto channel = server.accept_one();
    run_eval_model_owner(*channel, config, model, 404);
  });
  auto carol_channel = SocketChannel::connect_to("127.0.0.1", server.port());
  const EvalReport report = run_eval_data_owner(*carol_channel, config, x, 405);
  bob_thread.join();

  REQUIRE_FALSE(report.aborted);
  Rng keyrng = Rng::seeded(404).derive("eval-model-owner").derive("keygen");
  const KeyPair keys = keygen(config.key_bits, keyrng);
  const CodecParams codec(config.scale_constant, keys.pub.modulus);
  CHECK(report.label == plaintext_label(codec, w, x));
}
