// twsent-synth — deterministic labeled-tweet corpus generator.
//
// The public corpus the pipeline targets is not redistributable, so this
// writes a seeded stand-in CSV (ItemID,Sentiment,SentimentText) that the
// whole pipeline, including the acceptance runs, can consume.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "twsent/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"deterministic synthetic tweet corpus generator"};
  std::string out = "tweets.csv";
  std::size_t rows = 180420;
  std::uint64_t seed = 42;
  app.add_option("--out", out, "output CSV path");
  app.add_option("--rows", rows, "number of tweets");
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);

  try {
    twsent::SyntheticCorpus gen(seed);
    gen.write_csv(out, rows);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << rows << " tweets to " << out << "\n";
  return 0;
}
