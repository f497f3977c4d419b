#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtk {

enum class ErrorCode {
  ParseError,
  CarrierTooLarge,
  TensorTooLarge,
  NotDualRing,
  NotAUnit,
  SizeMismatch,
  RelationNotPreserved,
  InfiniteGroup,
  NoHalf,
  SkippedNotStable,
  Overflow,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class RelationNotPreserved : public Error {
 public:
  RelationNotPreserved(std::size_t relation_index, const std::string& message);

  std::size_t relation_index() const noexcept { return relation_index_; }

 private:
  std::size_t relation_index_;
};

}  // namespace mtk
