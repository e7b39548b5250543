#pragma once

#include <stdexcept>
#include <string>

namespace pairab {

// Every failure the library reports, grouped by how a caller should react:
// io (bad file), validation (bad input data or config), estimation (the
// data cannot support the requested statistic).
enum class Errc {
  // io
  IoError,
  // validation
  EmptyInput,
  DuplicateUnit,
  InvalidDesign,
  MissingHeader,
  MalformedRow,
  InvalidConfig,
  IndivisibleN,
  UnknownSetting,
  // estimation
  InsufficientCell,
  NoData,
  NoPairedData,
  SingularCovariance,
  SingularNormalEquations,
  SizeGuardExceeded,
};

enum class ErrorClass { io = 1, validation = 2, estimation = 3 };

constexpr ErrorClass classify(Errc c) {
  switch (c) {
    case Errc::IoError:
      return ErrorClass::io;
    case Errc::EmptyInput:
    case Errc::DuplicateUnit:
    case Errc::InvalidDesign:
    case Errc::MissingHeader:
    case Errc::MalformedRow:
    case Errc::InvalidConfig:
    case Errc::IndivisibleN:
    case Errc::UnknownSetting:
      return ErrorClass::validation;
    default:
      return ErrorClass::estimation;
  }
}

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::IoError: return "IoError";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DuplicateUnit: return "DuplicateUnit";
    case Errc::InvalidDesign: return "InvalidDesign";
    case Errc::MissingHeader: return "MissingHeader";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::IndivisibleN: return "IndivisibleN";
    case Errc::UnknownSetting: return "UnknownSetting";
    case Errc::InsufficientCell: return "InsufficientCell";
    case Errc::NoData: return "NoData";
    case Errc::NoPairedData: return "NoPairedData";
    case Errc::SingularCovariance: return "SingularCovariance";
    case Errc::SingularNormalEquations: return "SingularNormalEquations";
    case Errc::SizeGuardExceeded: return "SizeGuardExceeded";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }
  ErrorClass error_class() const { return classify(code_); }

 private:
  Errc code_;
};

}  // namespace pairab
