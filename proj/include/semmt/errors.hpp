#ifndef SEMMT_ERRORS_HPP
#define SEMMT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semmt {

/// Base class for all structured errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

/// Regex text could not be parsed; carries the byte offset of the failure.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& reason)
        : Error("syntax error at " + std::to_string(position) + ": " + reason),
          position_(position),
          reason_(reason) {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }
    [[nodiscard]] const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t position_;
    std::string reason_;
};

/// An automaton construction exceeded the configured state cap.
class ResourceLimit : public Error {
public:
    explicit ResourceLimit(std::size_t states)
        : Error("state cap exceeded: " + std::to_string(states) + " states"),
          states_(states) {}

    [[nodiscard]] std::size_t states() const noexcept { return states_; }

private:
    std::size_t states_;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    EmptyInput() : Error("empty input") {}
};

/// Sentence contains no quantifier or logic non-terminal.
class NoPatternMatch : public Error {
public:
    explicit NoPatternMatch(const std::string& text)
        : Error("no quantifier/logic pattern in: " + text) {}
};

/// Abstracted sentence did not match any known transformation skeleton.
class UnsupportedSkeleton : public Error {
public:
    explicit UnsupportedSkeleton(std::string skeleton)
        : Error("unsupported skeleton: " + skeleton), skeleton_(std::move(skeleton)) {}

    [[nodiscard]] const std::string& skeleton() const noexcept { return skeleton_; }

private:
    std::string skeleton_;
};

class MissingContext : public Error {
public:
    MissingContext() : Error("context mode requires a context_max bound") {}
};

class NoVagueQuantifier : public Error {
public:
    NoVagueQuantifier() : Error("sentence contains no vague quantifier") {}
};

class TranslatorError : public Error {
public:
    enum class Trip { forward, backward };

    TranslatorError(Trip trip, const std::string& cause)
        : Error(std::string(trip == Trip::forward ? "forward" : "backward") +
                " translation failed: " + cause),
          trip_(trip) {}

    [[nodiscard]] Trip trip() const noexcept { return trip_; }

private:
    Trip trip_;
};

class PipelineAborted : public Error {
public:
    using Error::Error;
};

class MissingLabels : public Error {
public:
    using Error::Error;
};

class MissingScores : public Error {
public:
    using Error::Error;
};

class UniverseMismatch : public Error {
public:
    using Error::Error;
};

class NoCorrectRecords : public Error {
public:
    NoCorrectRecords() : Error("no records labeled correct") {}
};

class MissingReferenceTranslation : public Error {
public:
    explicit MissingReferenceTranslation(const std::string& trip)
        : Error("missing reference translation for " + trip + " trip") {}
};

class UnknownRecordId : public Error {
public:
    explicit UnknownRecordId(const std::string& id)
        : Error("unknown record id: " + id) {}
};

class ValueOutOfRange : public Error {
public:
    using Error::Error;
};

}  // namespace semmt

#endif  // SEMMT_ERRORS_HPP
