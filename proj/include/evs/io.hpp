#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "evs/net.hpp"
#include "evs/prime_es.hpp"
#include "evs/probability.hpp"
#include "evs/stable_es.hpp"

namespace evs {

enum class DocumentKind { Prime, Stable, Net, Distribution };

using Document = std::variant<PrimeES, StableES, SafeNet, DistributionTable>;

/// Kind named by the first statement. Throws Error(Syntax) on an empty document.
DocumentKind document_kind(std::string_view text);

/// Parses and validates. Syntax errors carry line and column; validation errors carry
/// the line of the offending statement.
Document parse_document(std::string_view text);
PrimeES parse_prime(std::string_view text);
StableES parse_stable(std::string_view text);
SafeNet parse_net(std::string_view text);
DistributionTable parse_distribution(std::string_view text);

/// Unvalidated forms, for callers that want the normalization reports.
RawPrime parse_raw_prime(std::string_view text);
RawStable parse_raw_stable(std::string_view text);
RawNet parse_raw_net(std::string_view text);

/// Causality as its covering pairs, conflict as its immediate pairs.
std::string serialize(const PrimeES& es);
std::string serialize(const StableES& ses);
std::string serialize(const SafeNet& net);
std::string serialize(const DistributionTable& table);
std::string serialize(const Document& doc);

/// Shortest decimal form that reads back to the same double.
std::string format_weight(double w);

std::string read_file(const std::filesystem::path& path);
Document load_document(const std::filesystem::path& path);

}  // namespace evs
