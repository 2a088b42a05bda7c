#ifndef MCHAIN_IO_HPP
#define MCHAIN_IO_HPP

#include "mchain/cochains.hpp"
#include "mchain/derham.hpp"

namespace mchain {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A parsed chain document: exactly one of the payloads is set, matching
/// the document's kind tag.
struct Document {
    enum class Kind { Chain, RationalChain, Precochain, CsCochain, LfChain, DerhamChain };
    Kind kind = Kind::Chain;
    std::optional<Chain> chain;
    std::optional<Cochain> cochain;
    std::optional<DRChain> derham;

    const Target& target() const;
    int degree() const;
};

/// Versioned UTF-8 JSON text; unknown fields are rejected, rationals are
/// "p/q" strings. Construction errors (NotProper, NotSubmersion, ...)
/// propagate from the typed builders.
Document parse_document(const std::string& text);

std::string serialize(const Chain& c);
std::string serialize(const Cochain& c);
std::string serialize(const DRChain& c);
std::string serialize(const Document& d);

/// Affine map document for the CLI push/pull/shriek subcommands.
struct MapDocument {
    AffineMap map;
    Target source;
    Target dest;
};
MapDocument parse_map_document(const std::string& text);
std::string serialize(const MapDocument& m);

}  // namespace mchain

#endif
