#pragma once

#include <stdexcept>
#include <string>

namespace varattack {

/// Root of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// lang
class ParseError : public Error { using Error::Error; };
class UnsupportedLanguage : public Error { using Error::Error; };
class CollisionError : public Error { using Error::Error; };
class InvalidName : public Error { using Error::Error; };
class SpanError : public Error { using Error::Error; };
/// A renamed variant no longer has the original's tree shape.
class StructureMismatch : public Error { using Error::Error; };

// gateway
class BudgetExhausted : public Error { using Error::Error; };
class TransportError : public Error { using Error::Error; };
class ProtocolError : public Error { using Error::Error; };

// surrogate
class MissingVocabulary : public Error { using Error::Error; };

// ga
class DegeneratePopulation : public Error { using Error::Error; };
class NoMutationPossible : public Error { using Error::Error; };

// campaign / configuration
class ConfigError : public Error { using Error::Error; };
class DatasetError : public Error { using Error::Error; };

}  // namespace varattack
