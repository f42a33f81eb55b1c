#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lmix {

enum class ErrorCode {
  OutOfRange,
  SelfLoop,
  DuplicateEdge,
  InfeasibleParams,
  EmptyOrFullSubset,
  Disconnected,
  BipartiteWithoutLazy,
  NotRegular,
  ExceededCap,
  Overflow,
  MessageTooLarge,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lmix
