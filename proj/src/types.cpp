#include "subsse/types.hpp"

#include "subsse/encoding.hpp"

namespace subsse {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateKeyword: return "DuplicateKeyword";
    case ErrorCode::SeparatorInKeyword: return "SeparatorInKeyword";
    case ErrorCode::SeparatorInQuery: return "SeparatorInQuery";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::EmptyKeyword: return "EmptyKeyword";
    case ErrorCode::WeakParameter: return "WeakParameter";
    case ErrorCode::DecryptionFailure: return "DecryptionFailure";
    case ErrorCode::MalformedRequest: return "MalformedRequest";
    case ErrorCode::CounterConflict: return "CounterConflict";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::StorageError: return "StorageError";
    case ErrorCode::NotInitialized: return "NotInitialized";
    case ErrorCode::UnknownFileId: return "UnknownFileId";
    case ErrorCode::TracingDisabled: return "TracingDisabled";
    case ErrorCode::RevokedKeyword: return "RevokedKeyword";
    case ErrorCode::ServerUnreachable: return "ServerUnreachable";
    case ErrorCode::TargetUnachievable: return "TargetUnachievable";
    case ErrorCode::PortInUse: return "PortInUse";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

std::string PathLabel::hex() const { return hex_encode(bytes()); }

PathLabel PathLabel::from_hex(std::string_view hex) {
  const Bytes raw = hex_decode(hex);
  return PathLabel(raw);
}

void validate_keyword(std::string_view keyword) {
  if (keyword.empty()) throw Error(ErrorCode::EmptyKeyword, "keyword must be non-empty");
  if (keyword.find(kSeparator) != std::string_view::npos) {
    throw Error(ErrorCode::SeparatorInKeyword, "keyword contains the separator byte");
  }
}

void validate_query(std::string_view substring) {
  if (substring.empty()) throw Error(ErrorCode::EmptyQuery, "query substring must be non-empty");
  if (substring.find(kSeparator) != std::string_view::npos) {
    throw Error(ErrorCode::SeparatorInQuery, "query contains the separator byte");
  }
}

}  // namespace subsse
