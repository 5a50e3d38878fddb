// On-disk index layout (all integers little-endian):
//
//   "DORISIDX"  u32 version  16 hex chars digest  payload
//
// payload:
//   documents   varint n, then per doc: id, title, author, i32 year, u8 month,
//               u8 day, u8 kind, body, varint length, varint topic count,
//               topic ids
//   taxonomy    JSON text
//   postings    varint tokens, sorted; per token: token, varint postings,
//               per posting: varint doc delta, varint positions, varint
//               position deltas
//
// Strings are varint length + bytes. The digest is FNV-1a 64 over the
// payload and doubles as the corpus version served over HTTP.

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "doris/search_index.hpp"

namespace doris {

namespace {

constexpr std::string_view kMagic = "DORISIDX";
constexpr std::size_t kDigestChars = 16;
constexpr std::size_t kHeaderSize = kMagic.size() + 4 + kDigestChars;

class Writer {
 public:
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      out_.push_back(static_cast<char>((v & 0x7F) | 0x80));
      v >>= 7;
    }
    out_.push_back(static_cast<char>(v));
  }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void str(std::string_view s) {
    varint(s.size());
    out_.append(s);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const auto byte = static_cast<std::uint8_t>(take(1).front());
      v |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
      if ((byte & 0x80) == 0) return v;
    }
    corrupt("overlong varint");
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1).front()); }
  std::uint32_t u32() {
    auto bytes = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[i])) << (8 * i);
    return v;
  }
  std::string str() { return std::string(take(checkedSize(varint()))); }
  std::size_t checkedSize(std::uint64_t n) const {
    if (n > in_.size() - pos_) corrupt("length field past end of data");
    return static_cast<std::size_t>(n);
  }
  bool done() const { return pos_ == in_.size(); }

  [[noreturn]] static void corrupt(const std::string& what) {
    throw IndexFormatError("corrupt index: " + what);
  }

 private:
  std::string_view take(std::size_t n) {
    if (n > in_.size() - pos_) corrupt("unexpected end of data");
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string SearchIndex::digest(std::string_view payload) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : payload) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(kDigestChars, '0');
  for (std::size_t i = 0; i < kDigestChars; ++i) out[kDigestChars - 1 - i] = kHex[(h >> (4 * i)) & 0xF];
  return out;
}

std::string SearchIndex::payload() const {
  Writer w;
  w.varint(docs_.size());
  for (DocIndex d = 0; d < docs_.size(); ++d) {
    const auto& doc = docs_[d];
    w.str(doc.id);
    w.str(doc.title);
    w.str(doc.author);
    w.u32(static_cast<std::uint32_t>(doc.datePublished.year));
    w.u8(static_cast<std::uint8_t>(doc.datePublished.month));
    w.u8(static_cast<std::uint8_t>(doc.datePublished.day));
    w.u8(static_cast<std::uint8_t>(doc.kind));
    w.str(doc.body);
    w.varint(lengths_[d]);
    w.varint(docTopics_[d].size());
    for (const auto& t : docTopics_[d]) w.str(t);
  }
  w.str(taxonomy_.toJson().dump());

  std::vector<std::string_view> tokens;
  tokens.reserve(postings_.size());
  for (const auto& [token, _] : postings_) tokens.push_back(token);
  std::sort(tokens.begin(), tokens.end());
  w.varint(tokens.size());
  for (auto token : tokens) {
    const auto& list = postings_.find(token)->second;
    w.str(token);
    w.varint(list.size());
    DocIndex prevDoc = 0;
    for (const auto& p : list) {
      w.varint(p.doc - prevDoc);
      prevDoc = p.doc;
      w.varint(p.positions.size());
      std::uint32_t prev = 0;
      for (auto pos : p.positions) {
        w.varint(pos - prev);
        prev = pos;
      }
    }
  }
  return w.take();
}

std::string SearchIndex::serialize() const {
  Writer header;
  header.u32(kFormatVersion);
  std::string out(kMagic);
  out += header.take();
  out += hash_;
  out += payload();
  return out;
}

SearchIndex SearchIndex::deserialize(std::string_view bytes) {
  if (bytes.size() < kHeaderSize || bytes.substr(0, kMagic.size()) != kMagic) {
    throw IndexFormatError("not a doris index file");
  }
  Reader header(bytes.substr(kMagic.size(), 4));
  if (const auto version = header.u32(); version != kFormatVersion) {
    throw IndexFormatError("index format version " + std::to_string(version) +
                               " is not supported (expected " + std::to_string(kFormatVersion) +
                               "); rebuild the index",
                           std::to_string(version));
  }
  const auto stored = std::string(bytes.substr(kMagic.size() + 4, kDigestChars));
  const auto body = bytes.substr(kHeaderSize);
  if (digest(body) != stored) Reader::corrupt("digest mismatch");

  SearchIndex index;
  Reader r(body);
  const auto n = r.checkedSize(r.varint());
  index.docs_.resize(n);
  index.lengths_.resize(n);
  index.docTopics_.resize(n);
  for (std::size_t d = 0; d < n; ++d) {
    auto& doc = index.docs_[d];
    doc.id = r.str();
    doc.title = r.str();
    doc.author = r.str();
    doc.datePublished.year = static_cast<std::int32_t>(r.u32());
    doc.datePublished.month = r.u8();
    doc.datePublished.day = r.u8();
    const auto kind = r.u8();
    if (kind >= kAllDocumentKinds.size()) Reader::corrupt("document kind out of range");
    doc.kind = static_cast<DocumentKind>(kind);
    doc.body = r.str();
    index.lengths_[d] = static_cast<std::size_t>(r.varint());
    const auto topics = r.checkedSize(r.varint());
    for (std::size_t i = 0; i < topics; ++i) index.docTopics_[d].push_back(r.str());
    if (d > 0 && !(index.docs_[d - 1].id < doc.id)) Reader::corrupt("documents out of order");
  }

  auto json = nlohmann::json::parse(r.str(), nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) Reader::corrupt("taxonomy is not valid JSON");
  index.taxonomy_ = TopicTaxonomy::fromJson(json);

  const auto tokens = r.checkedSize(r.varint());
  index.postings_.reserve(tokens);
  for (std::size_t t = 0; t < tokens; ++t) {
    auto token = r.str();
    auto& list = index.postings_[token];
    list.resize(r.checkedSize(r.varint()));
    std::uint64_t doc = 0;
    for (auto& p : list) {
      doc += r.varint();
      if (doc >= n) Reader::corrupt("posting names a missing document");
      p.doc = static_cast<DocIndex>(doc);
      p.positions.resize(r.checkedSize(r.varint()));
      std::uint64_t pos = 0;
      for (auto& position : p.positions) {
        pos += r.varint();
        position = static_cast<std::uint32_t>(pos);
      }
    }
  }
  if (!r.done()) Reader::corrupt("trailing bytes");

  index.finalize();
  return index;
}

void SearchIndex::save(const std::filesystem::path& path) const {
  // Write beside the target and rename so a serving process never observes
  // a half-written file.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write index " + tmp.string(), tmp.string());
    const auto bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing index " + tmp.string(), tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move index into place at " + path.string() + ": " + ec.message(),
                        path.string());
}

SearchIndex SearchIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index " + path.string(), path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace doris
