#include "stancegraph/errors.hpp"

namespace stancegraph {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::UnknownEndpoint: return "UnknownEndpoint";
    case Errc::KindTypingViolation: return "KindTypingViolation";
    case Errc::MissingTimestamp: return "MissingTimestamp";
    case Errc::IllegalStance: return "IllegalStance";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::FrozenGraph: return "FrozenGraph";
    case Errc::ParseError: return "ParseError";
    case Errc::EmptyTopic: return "EmptyTopic";
    case Errc::UnlabeledStance: return "UnlabeledStance";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NoForwardRecorded: return "NoForwardRecorded";
    case Errc::TooFewEdges: return "TooFewEdges";
    case Errc::DegenerateTimestamps: return "DegenerateTimestamps";
    case Errc::NotEnoughNegatives: return "NotEnoughNegatives";
    case Errc::SingleClass: return "SingleClass";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::HashMismatch: return "HashMismatch";
    case Errc::IoError: return "IoError";
    case Errc::ProviderFailure: return "ProviderFailure";
  }
  return "Error";
}

}  // namespace stancegraph
