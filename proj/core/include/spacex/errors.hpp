#pragma once

#include <stdexcept>
#include <string>

namespace spacex {

// Exit-code contract used by the CLI: 0 success, 1 analysis/validation
// error, 2 input error.
enum class ErrorKind { Input = 2, Analysis = 1 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), kind_(kind), name_(std::move(name)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

private:
  ErrorKind kind_;
  std::string name_;
};

#define SPACEX_DEFINE_ERROR(NAME, KIND)                                     \
  class NAME : public Error {                                               \
  public:                                                                   \
    explicit NAME(const std::string& what) : Error(KIND, #NAME, what) {}    \
  }

SPACEX_DEFINE_ERROR(NotARepository, ErrorKind::Input);
SPACEX_DEFINE_ERROR(EmptyRepository, ErrorKind::Input);
SPACEX_DEFINE_ERROR(UnreadableObject, ErrorKind::Input);
SPACEX_DEFINE_ERROR(SchemaViolation, ErrorKind::Input);
SPACEX_DEFINE_ERROR(TimestampParseError, ErrorKind::Input);
SPACEX_DEFINE_ERROR(AuthFailure, ErrorKind::Input);
SPACEX_DEFINE_ERROR(NetworkError, ErrorKind::Input);
SPACEX_DEFINE_ERROR(ConfigError, ErrorKind::Input);
SPACEX_DEFINE_ERROR(MissingArtifact, ErrorKind::Input);

SPACEX_DEFINE_ERROR(EmptyInput, ErrorKind::Analysis);
SPACEX_DEFINE_ERROR(UnknownColumn, ErrorKind::Analysis);
SPACEX_DEFINE_ERROR(DegenerateInput, ErrorKind::Analysis);
SPACEX_DEFINE_ERROR(RankDeficient, ErrorKind::Analysis);
SPACEX_DEFINE_ERROR(Underdetermined, ErrorKind::Analysis);
SPACEX_DEFINE_ERROR(NonCount, ErrorKind::Analysis);
SPACEX_DEFINE_ERROR(DomainError, ErrorKind::Analysis);
SPACEX_DEFINE_ERROR(AlignmentError, ErrorKind::Analysis);
SPACEX_DEFINE_ERROR(NoDimensions, ErrorKind::Analysis);
SPACEX_DEFINE_ERROR(AllDegenerate, ErrorKind::Analysis);

#undef SPACEX_DEFINE_ERROR

// Carries the server-advised retry delay, when one was given.
class RateLimited : public Error {
public:
  RateLimited(const std::string& what, double retry_after_seconds)
      : Error(ErrorKind::Input, "RateLimited", what),
        retry_after_seconds_(retry_after_seconds) {}

  double retry_after_seconds() const noexcept { return retry_after_seconds_; }

private:
  double retry_after_seconds_;
};

}  // namespace spacex
