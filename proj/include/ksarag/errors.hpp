#pragma once
// Error taxonomy shared across the pipeline. Each failure mode the callers
// are expected to branch on gets its own type; everything derives from Error
// so batch drivers can catch the whole family at series granularity.

#include <stdexcept>
#include <string>
#include <vector>

namespace ksarag {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated precondition or invalid argument (bad dims, overlap >= size, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Input bytes could not be understood at all (carries a short excerpt).
class ParseError : public Error {
public:
    using Error::Error;
};

// Parsed fine but the wrong number of items ("Knowledge: expected 3, got 4").
class CardinalityError : public Error {
public:
    using Error::Error;
};

// A required key is absent from a structured response.
class SchemaError : public Error {
public:
    using Error::Error;
};

// A score is non-integer or outside 1..5.
class RangeError : public Error {
public:
    using Error::Error;
};

// A required text field is empty (e.g. missing justification).
class ContentError : public Error {
public:
    using Error::Error;
};

// Template rendering failed (unknown placeholder, unbalanced braces).
class RenderError : public Error {
public:
    using Error::Error;
};

// Remote call failed after all retries. Keeps the attempt count and the last
// HTTP status (0 when the failure was below HTTP, e.g. connect refused).
class TransportError : public Error {
public:
    TransportError(const std::string& what, int attempts, int last_status)
        : Error(what), attempts_(attempts), last_status_(last_status) {}
    int attempts() const { return attempts_; }
    int last_status() const { return last_status_; }

private:
    int attempts_ = 0;
    int last_status_ = 0;
};

// Remote endpoint answered with a shape we cannot accept (e.g. wrong dim).
class ProtocolError : public Error {
public:
    using Error::Error;
};

// Scripted backend had no fixture for the request; names the expected file.
class FixtureMissError : public Error {
public:
    using Error::Error;
};

// Request rejected before send because it cannot fit the context window.
class BudgetError : public Error {
public:
    using Error::Error;
};

// Persisted artifact failed its integrity check.
class ChecksumError : public Error {
public:
    using Error::Error;
};

// A knowledge base directory yielded zero admissible documents.
class CorpusEmptyError : public Error {
public:
    using Error::Error;
};

// Bad or missing run configuration; maps to CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace ksarag
