// surrogate_server: serve the deterministic surrogate over the HTTP protocol.
//
//   surrogate_server --vocab data/vocab.txt --port 8080

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "varattack/core/errors.hpp"
#include "varattack/gateway/http.hpp"
#include "varattack/surrogate/surrogate.hpp"

using namespace varattack;

namespace {
gateway::WireServer* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate victim and substitute server"};
  std::string vocab_path = VARATTACK_DEFAULT_VOCAB;
  std::string host = "127.0.0.1";
  int port = 8080;
  app.add_option("--vocab", vocab_path, "vocabulary file")->capture_default_str();
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    surrogate::SurrogateBackend backend(surrogate::Vocabulary::load(vocab_path));
    gateway::WireServer server(backend);
    int bound = server.bind(host, port);
    std::cout << "listening on " << host << ":" << bound << std::endl;
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.serve();
  } catch (const Error& e) {
    std::cerr << "surrogate_server: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
