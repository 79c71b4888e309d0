#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "porcheck/process.hpp"
#include "porcheck/semantics.hpp"
#include "porcheck/theory.hpp"

namespace porcheck {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct ProcessDef {
  std::vector<Term> params;  // template variables, substituted on instantiation
  Process body;
};

struct Query {
  enum class Kind { Equiv, Include };
  Kind kind = Kind::Equiv;
  std::string left_name;
  std::string right_name;
  Process left;
  Process right;
  Frame left_frame;
  Frame right_frame;

  Configuration left_config() const { return Configuration::alive({left}, left_frame); }
  Configuration right_config() const { return Configuration::alive({right}, right_frame); }
};

struct Model {
  TheoryPtr theory;
  std::vector<Channel> channels;
  std::vector<std::string> names;
  std::map<std::string, ProcessDef> processes;
  std::map<std::string, Frame> frames;
  std::optional<Query> query;

  // Instantiates a closed, parameterless process by name.
  Process process(const std::string& name) const;
};

Model parse_model(const std::string& text);
Model parse_model_file(const std::string& path);

}  // namespace porcheck
