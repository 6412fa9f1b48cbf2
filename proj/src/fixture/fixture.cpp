#include "triage/fixture/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "triage/core/decimal.hpp"
#include "triage/core/error.hpp"

namespace triage::fixture {
namespace {

const std::vector<std::string> kBrands{"Aurelle", "Corvanti", "Lindqvist", "Ostara",
                                       "Belmonde", "Tavira",   "Marchetti", "Solenne"};

const std::vector<std::string> kLines{
    "Amber",     "Solstice", "Noir",      "Azure",    "Velvet",   "Citrine",    "Driftwood",
    "Ember",     "Glacier",  "Harbor",    "Iris",     "Jasmine",  "Kestrel",    "Lumen",
    "Meridian",  "Nectar",   "Onyx",      "Pampas",   "Quartz",   "Riviera",    "Saffron",
    "Tundra",    "Umbra",    "Verbena",   "Willow",   "Zephyr",   "Aster",      "Bergamot",
    "Cobalt",    "Dune",     "Eclipse",   "Fennel",   "Garnet",   "Heather",    "Indigo",
    "Juniper",   "Lagoon",   "Magnolia",  "Nocturne", "Orchid",   "Pepper",     "Quill",
    "Rosewood",  "Sable",    "Tamarind",  "Vetiver",  "Wisteria", "Yarrow",     "Zinnia",
    "Alpine",    "Boreal",   "Cedar",     "Delta",    "Ether",    "Fjord",      "Grove",
    "Halcyon",   "Isle",     "Kelp",      "Lotus"};

struct ProductType {
  const char* name;
  const char* category;
};

const std::vector<ProductType> kTypes{{"Eau de Toilette", "perfume"},
                                      {"Eau de Parfum", "perfume"},
                                      {"Sport Shoes", "shoes"},
                                      {"Polo Shirt", "shirts"}};

const std::vector<std::string> kExtras{"new", "original", "sealed"};
const std::vector<std::string> kGenuineOrigins{"DE", "FR", "IT", "US", "GB"};

// Portable draws: the standard distributions are not specified bit-for-bit
// across library implementations, the engine is.
struct Rng {
  std::mt19937_64 engine;
  double unit() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
  bool chance(double p) { return unit() < p; }
};

struct Product {
  ProductSpec spec;
  std::string brand, line, code, type, category;
  std::int64_t base_cents = 0;
};

enum class Kind { kGenuine, kDiscounted, kFake, kSuperfluousFake };

struct Draft {
  std::size_t product;
  Kind kind;
  std::int64_t cents;
};

std::string title_for(const Product& p, Kind kind, Rng& rng) {
  if (kind == Kind::kSuperfluousFake) {
    return p.code + " " + p.line + " " + p.brand + " " + p.type +
           " outlet lot tester unboxed gift clearance";
  }
  const std::string& extra = kExtras[rng.index(kExtras.size())];
  switch (rng.index(5)) {
    case 0: return p.brand + " " + p.line + " " + p.code + " " + p.type;
    case 1: return p.brand + " " + p.line + " " + p.type + " " + p.code;
    case 2: return p.brand + " " + p.line + " " + p.code + " " + p.type + " " + extra;
    case 3: return p.line + " by " + p.brand + " " + p.code + " " + p.type;
    default: return p.brand + " " + p.line + " " + p.type + " " + p.code + " " + extra;
  }
}

std::string cents_text(std::int64_t cents) { return Decimal::from_units(cents, 2).to_string(); }

std::int64_t scaled(std::int64_t cents, double factor) {
  return std::max<std::int64_t>(1, std::llround(static_cast<double>(cents) * factor));
}

}  // namespace

void to_json(Json& j, const GoldLabel& g) {
  j = Json{{"platform", g.key.platform}, {"offer_id", g.key.offer_id}, {"product_label", g.product_label}};
}

Fixture generate_fixture(const FixtureOptions& opts) {
  if (opts.offers < 4) throw Error(ErrorCode::kInvalidArgument, "need at least 4 offers");
  if (!(opts.fake_rate >= 0.0 && opts.fake_rate < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fake rate must be in [0,1)");
  }
  if (!(opts.discount_rate >= 0.0 && opts.discount_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "discount rate must be in [0,1]");
  }
  if (opts.superfluous < 0) throw Error(ErrorCode::kInvalidArgument, "superfluous must be >= 0");

  Rng rng{std::mt19937_64(opts.seed)};
  const std::int64_t fakes = std::llround(static_cast<double>(opts.offers) * opts.fake_rate);
  const std::int64_t genuines = opts.offers - fakes;
  std::int64_t n_products = std::max<std::int64_t>(4, opts.offers / 25);
  n_products = std::min(n_products, genuines / 3);
  if (n_products < 1) throw Error(ErrorCode::kInvalidArgument, "too few genuine offers");
  if (opts.superfluous > n_products || 3 * opts.superfluous > fakes) {
    throw Error(ErrorCode::kInvalidArgument, "not enough products or counterfeits for superfluous groups");
  }

  std::vector<Product> products;
  std::vector<std::string> codes;
  for (std::int64_t i = 0; i < n_products; ++i) {
    Product p;
    auto idx = static_cast<std::size_t>(i);
    p.brand = kBrands[rng.index(kBrands.size())];
    p.line = kLines[idx % kLines.size()];
    if (idx >= kLines.size()) p.line += " " + kLines[(idx / kLines.size() + idx) % kLines.size()];
    std::string code;
    do {
      code = {static_cast<char>('A' + rng.index(26)), static_cast<char>('A' + rng.index(26))};
      code += std::to_string(100 + rng.index(900));
    } while (std::find(codes.begin(), codes.end(), code) != codes.end());
    codes.push_back(code);
    p.code = code;
    const ProductType& t = kTypes[rng.index(kTypes.size())];
    p.type = t.name;
    p.category = t.category;
    p.base_cents = 4000 + static_cast<std::int64_t>(rng.index(21001));
    char id[32];
    std::snprintf(id, sizeof(id), "p%03lld", static_cast<long long>(i + 1));
    p.spec = ProductSpec{id, p.brand, p.line, p.type, {p.code}};
    products.push_back(std::move(p));
  }

  std::vector<Draft> drafts;
  // Three genuine offers per product first; the first stays at list price so
  // every product has a reliable maximum.
  for (std::size_t i = 0; i < products.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      bool discounted = k > 0 && rng.chance(opts.discount_rate);
      double f = discounted ? rng.uniform(0.3, 0.5) : rng.uniform(0.8, 1.0);
      drafts.push_back({i, discounted ? Kind::kDiscounted : Kind::kGenuine, scaled(products[i].base_cents, f)});
    }
  }
  for (std::int64_t g = 3 * n_products; g < genuines; ++g) {
    std::size_t i = rng.index(products.size());
    bool discounted = rng.chance(opts.discount_rate);
    double f = discounted ? rng.uniform(0.3, 0.5) : rng.uniform(0.8, 1.0);
    drafts.push_back({i, discounted ? Kind::kDiscounted : Kind::kGenuine, scaled(products[i].base_cents, f)});
  }
  // Superfluous groups: three counterfeits priced close together, so alone
  // they look consistent.
  for (std::int64_t s = 0; s < opts.superfluous; ++s) {
    auto i = static_cast<std::size_t>(s);
    std::int64_t top = scaled(products[i].base_cents, rng.uniform(0.2, 0.35));
    for (int k = 0; k < 3; ++k) {
      drafts.push_back({i, Kind::kSuperfluousFake, k == 0 ? top : scaled(top, rng.uniform(0.9, 1.0))});
    }
  }
  for (std::int64_t f = 3 * opts.superfluous; f < fakes; ++f) {
    std::size_t i = rng.index(products.size());
    drafts.push_back({i, Kind::kFake, scaled(products[i].base_cents, rng.uniform(0.15, 0.4))});
  }

  for (std::size_t k = drafts.size(); k > 1; --k) std::swap(drafts[k - 1], drafts[rng.index(k)]);

  Fixture out;
  for (const auto& p : products) out.products.push_back(p.spec);
  for (std::size_t n = 0; n < drafts.size(); ++n) {
    const Draft& d = drafts[n];
    const Product& p = products[d.product];
    const bool fake = d.kind == Kind::kFake || d.kind == Kind::kSuperfluousFake;
    char id[32];
    std::snprintf(id, sizeof(id), "o%05zu", n + 1);
    OfferKey key{opts.platform, id};

    Json rec;
    rec["platform"] = key.platform;
    rec["offer_id"] = key.offer_id;
    rec["title"] = title_for(p, d.kind, rng);
    if (!fake && rng.chance(0.6)) rec["description"] = "Genuine " + p.brand + " " + p.line + ", boxed.";
    if (fake && rng.chance(0.3)) rec["description"] = "Top quality, fast shipping.";
    rec["price"] = Json{{"amount", cents_text(d.cents)}, {"currency", "EUR"}};

    Json seller;
    if (fake) {
      if (rng.chance(0.4)) {
        seller = Json{{"id", "bargain-hub-88"}, {"rating_percent", 99.1}};
      } else {
        char sid[32];
        std::snprintf(sid, sizeof(sid), "deal-%02zu", rng.index(10) + 1);
        seller = Json{{"id", sid}, {"rating_percent", std::round(rng.uniform(88.0, 99.9) * 10.0) / 10.0}};
      }
      double r = rng.unit();
      rec["origin_country"] = r < 0.7 ? "CN" : (r < 0.9 ? "HK" : "DE");
      rec["payment_methods"] = rng.chance(0.3) ? Json::array({"western_union"}) : Json::array({"paypal"});
      rec["quantity_available"] = rng.chance(0.5) ? 100 + static_cast<std::int64_t>(rng.index(401))
                                                  : 1 + static_cast<std::int64_t>(rng.index(20));
    } else {
      char sid[32];
      std::snprintf(sid, sizeof(sid), "shop-%02zu", rng.index(30) + 1);
      seller = Json{{"id", sid}, {"rating_percent", std::round(rng.uniform(97.0, 100.0) * 10.0) / 10.0}};
      rec["origin_country"] = kGenuineOrigins[rng.index(kGenuineOrigins.size())];
      rec["payment_methods"] = Json::array({"paypal", "credit_card"});
      rec["quantity_available"] = 1 + static_cast<std::int64_t>(rng.index(10));
    }
    rec["seller"] = std::move(seller);
    rec["category"] = p.category;
    char listed[32];
    std::snprintf(listed, sizeof(listed), "2026-03-%02zuT%02zu:%02zu:00Z", rng.index(28) + 1,
                  rng.index(24), rng.index(60));
    rec["listed_at"] = listed;
    out.feed.push_back(std::move(rec));

    Verdict v;
    v.offer_ref = key;
    v.label = fake ? VerdictLabel::kCounterfeit : VerdictLabel::kGenuine;
    v.reviewer = "fixture";
    v.decided_at = "2026-04-01T00:00:00Z";
    out.labels.push_back(std::move(v));
    out.gold.push_back(GoldLabel{key, p.spec.spec_id});
    if (fake) ++out.counterfeit_count;
    if (d.kind == Kind::kSuperfluousFake) ++out.superfluous_offers;
  }
  return out;
}

std::vector<std::filesystem::path> write_fixture(const Fixture& f, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths{dir / "feed.jsonl", dir / "labels.jsonl", dir / "gold.jsonl",
                                           dir / "products.json"};
  write_jsonl(paths[0], f.feed);
  write_jsonl_of(paths[1], f.labels);
  write_jsonl_of(paths[2], f.gold);
  write_text_atomic(paths[3], Json(f.products).dump(2) + "\n");
  return paths;
}

}  // namespace triage::fixture
