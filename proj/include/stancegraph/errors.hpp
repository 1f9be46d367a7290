#pragma once

#include <stdexcept>
#include <string>

namespace stancegraph {

enum class Errc {
  DuplicateId,
  SchemaMismatch,
  UnknownEndpoint,
  KindTypingViolation,
  MissingTimestamp,
  IllegalStance,
  UnknownNode,
  FrozenGraph,
  ParseError,
  EmptyTopic,
  UnlabeledStance,
  ShapeMismatch,
  NoForwardRecorded,
  TooFewEdges,
  DegenerateTimestamps,
  NotEnoughNegatives,
  SingleClass,
  ConfigInvalid,
  HashMismatch,
  IoError,
  ProviderFailure,
};

const char* errc_name(Errc c);

// Single exception type carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace stancegraph
