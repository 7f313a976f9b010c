#pragma once

#include <stdexcept>
#include <string>

namespace gitrank {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric formula was evaluated outside its domain (sloc < 1, cc < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidUrl : public Error {
 public:
  using Error::Error;
};

/// Clone/open of a repository failed; the repository is dropped, the run goes on.
class CloneFailed : public Error {
 public:
  using Error::Error;
};

/// No function or file could be measured; the repository is dropped from ranking.
class NoAnalyzableCode : public Error {
 public:
  using Error::Error;
};

/// Hosting API still failing after all retries.
class ApiUnavailable : public Error {
 public:
  using Error::Error;
};

class FixtureMalformed : public Error {
 public:
  using Error::Error;
};

class MissingMeasure : public Error {
 public:
  using Error::Error;
};

/// Bad paths, shard string, weights or config file. Fatal for the whole run.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NoMeasuredRepos : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gitrank
