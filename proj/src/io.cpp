#include "sd/io.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sd/errors.hpp"

namespace sd {

namespace {

Int json_int(const nlohmann::json& v) {
    if (v.is_string()) return Int(v.get<std::string>());
    if (v.is_number_integer()) return Int(static_cast<long>(v.get<long long>()));
    throw ParseError("expected integer or decimal string in literal");
}

std::vector<Int> json_int_vector(const nlohmann::json& v) {
    if (!v.is_array() || v.empty()) throw ParseError("expected nonempty coefficient array");
    std::vector<Int> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(json_int(e));
    return out;
}

} // namespace

RationalMap map_from_json(const nlohmann::json& j) {
    if (!j.contains("num") || !j.contains("den"))
        throw ParseError("map literal needs \"num\" and \"den\"");
    return map_from_poly(json_int_vector(j["num"]), json_int_vector(j["den"]));
}

nlohmann::json map_to_json(const RationalMap& f) {
    nlohmann::json j;
    for (const auto& c : f.num().coeffs()) j["num"].push_back(c.get_str());
    for (const auto& c : f.den().coeffs()) j["den"].push_back(c.get_str());
    return j;
}

CurveP1xP1 curve_from_json(const nlohmann::json& j) {
    if (!j.contains("bidegree") || !j.contains("coeffs"))
        throw ParseError("curve literal needs \"bidegree\" and \"coeffs\"");
    unsigned d1 = j["bidegree"].at(0).get<unsigned>();
    unsigned d2 = j["bidegree"].at(1).get<unsigned>();
    std::vector<std::vector<Int>> rows;
    for (const auto& row : j["coeffs"]) rows.push_back(json_int_vector(row));
    return CurveP1xP1(d1, d2, std::move(rows));
}

nlohmann::json curve_to_json(const CurveP1xP1& c) {
    nlohmann::json j;
    j["bidegree"] = {c.d1(), c.d2()};
    for (const auto& row : c.coeffs()) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& v : row) r.push_back(v.get_str());
        j["coeffs"].push_back(r);
    }
    return j;
}

ParamFamily family_from_json(const nlohmann::json& j) {
    if (!j.contains("degree") || !j.contains("num") || !j.contains("den"))
        throw ParseError("family literal needs \"degree\", \"num\", \"den\"");
    auto side = [](const nlohmann::json& v) {
        std::vector<ipoly::Poly> out;
        for (const auto& e : v) out.push_back(json_int_vector(e));
        return out;
    };
    ParamFamily::MapPolys first{side(j["num"]), side(j["den"])};
    std::optional<ParamFamily::MapPolys> second;
    if (j.contains("num2") && j.contains("den2"))
        second = ParamFamily::MapPolys{side(j["num2"]), side(j["den2"])};
    return ParamFamily(j["degree"].get<unsigned>(), std::move(first), std::move(second));
}

std::optional<RationalMap> builtin_map(const std::string& name) {
    if (name == "z2") return map_from_poly({Int(0), Int(0), Int(1)}, {Int(1)});
    if (name == "z2m2") return map_from_poly({Int(-2), Int(0), Int(1)}, {Int(1)});
    if (name == "z2p1") return map_from_poly({Int(1), Int(0), Int(1)}, {Int(1)});
    if (name == "cheb3") return map_from_poly({Int(0), Int(-3), Int(0), Int(1)}, {Int(1)});
    if (name == "lattes-i")
        return map_from_poly({Int(1), Int(0), Int(-2), Int(0), Int(1)},
                             {Int(0), Int(4), Int(0), Int(4)});
    return std::nullopt;
}

RationalMap load_map(const std::string& spec) {
    if (auto m = builtin_map(spec)) return *m;
    return map_from_json(nlohmann::json::parse(read_file(spec)));
}

CurveP1xP1 load_curve(const std::string& spec) {
    if (spec == "diagonal") return CurveP1xP1::diagonal();
    return curve_from_json(nlohmann::json::parse(read_file(spec)));
}

ParamFamily load_family(const std::string& spec) {
    if (spec == "z2pt") return ParamFamily::unicritical(2);
    if (spec == "z2pt-pair") {
        // split pair (z^2 + t, z^2 - t)
        ParamFamily::MapPolys a, b;
        a.num = {{Int(0), Int(1)}, {Int(0)}, {Int(1)}};
        a.den = {{Int(1)}, {Int(0)}, {Int(0)}};
        b.num = {{Int(0), Int(-1)}, {Int(0)}, {Int(1)}};
        b.den = {{Int(1)}, {Int(0)}, {Int(0)}};
        return ParamFamily(2, std::move(a), std::move(b));
    }
    return family_from_json(nlohmann::json::parse(read_file(spec)));
}

ProjPointQ parse_point(const std::string& s) {
    if (s == "inf" || s == "oo") return ProjPointQ::infinity();
    return ProjPointQ(parse_rational(s));
}

Rat parse_rational(const std::string& s) {
    try {
        Rat r(s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("cannot parse rational: " + s);
    }
}

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- SHA-1 (for git-style blob hashes of inputs) ------------------------------

namespace {

struct Sha1 {
    std::array<std::uint32_t, 5> h{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                                   0xC3D2E1F0u};
    std::uint64_t total{0};
    std::array<unsigned char, 64> block{};
    size_t fill{0};

    static std::uint32_t rol(std::uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

    void compress(const unsigned char* p) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        auto [a, b, c, d, e] = h;
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            std::uint32_t t = rol(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rol(b, 30);
            b = a;
            a = t;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    void update(const unsigned char* p, size_t n) {
        total += n;
        while (n > 0) {
            size_t take = std::min(n, block.size() - fill);
            std::memcpy(block.data() + fill, p, take);
            fill += take;
            p += take;
            n -= take;
            if (fill == block.size()) {
                compress(block.data());
                fill = 0;
            }
        }
    }

    std::string hexdigest() {
        std::uint64_t bits = total * 8;
        unsigned char pad = 0x80;
        update(&pad, 1);
        unsigned char zero = 0;
        while (fill != 56) update(&zero, 1);
        unsigned char len[8];
        for (int i = 0; i < 8; ++i) len[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        update(len, 8);
        char out[41];
        for (int i = 0; i < 5; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
        return std::string(out, 40);
    }
};

} // namespace

std::string git_blob_hash(const std::string& content) {
    Sha1 s;
    std::string header = "blob " + std::to_string(content.size());
    s.update(reinterpret_cast<const unsigned char*>(header.data()), header.size() + 1);
    s.update(reinterpret_cast<const unsigned char*>(content.data()), content.size());
    return s.hexdigest();
}

// --- tabular emission ---------------------------------------------------------

std::string measure_csv(const EmpiricalMeasure& mu) {
    std::ostringstream os;
    os << "re,im,weight\n";
    for (const auto& [p, w] : mu.samples) {
        Complex z = p.near_infinity() ? Complex(0, 0) : p.affine();
        if (p.near_infinity())
            os << "inf,inf," << fmt_real(w) << "\n";
        else
            os << fmt_real(z.real()) << "," << fmt_real(z.imag()) << "," << fmt_real(w) << "\n";
    }
    return os.str();
}

std::string height_csv(const std::string& point_label, const HeightEstimate& h) {
    std::ostringstream head, row;
    head << "point,value,error";
    row << point_label << "," << fmt_real(h.value) << "," << fmt_real(h.error);
    for (const auto& [pl, v] : h.place_breakdown) {
        head << (pl.archimedean ? ",arch" : ",badprime_" + pl.prime.get_str());
        row << "," << fmt_real(v);
    }
    return head.str() + "\n" + row.str() + "\n";
}

std::string energy_json(const MeasureEqualityReport& r) {
    nlohmann::json j;
    j["statistic"] = fmt_real(r.statistic);
    j["se"] = fmt_real(r.se);
    j["decision"] = r.decision == MeasureDecision::Equal
                        ? "Equal"
                        : (r.decision == MeasureDecision::NotEqual ? "NotEqual" : "Inconclusive");
    return j.dump(2) + "\n";
}

std::string screen_json(const ScreenResult& r) {
    nlohmann::json j;
    j["verdict"] = r.verdict == SpecialVerdict::Special
                       ? "Special"
                       : (r.verdict == SpecialVerdict::NotSpecialEvidence ? "NotSpecialEvidence"
                                                                          : "Unknown");
    j["evidence"] = r.evidence;
    if (r.verdict == SpecialVerdict::NotSpecialEvidence) j["statistic"] = fmt_real(r.statistic);
    return j.dump(2) + "\n";
}

std::string curve_scan_csv(const std::vector<CurveScanRow>& rows) {
    std::ostringstream os;
    os << "t,h_t,count,min_height\n";
    for (const auto& r : rows)
        os << r.t.get_str() << "," << fmt_real(r.h_t) << "," << r.count << ","
           << fmt_real(r.min_height) << "\n";
    return os.str();
}

std::string dky_csv(const DkyTable& t) {
    std::ostringstream os;
    os << "t1,t2,count\n";
    for (const auto& c : t.cells) {
        os << c.t1.get_str() << "," << c.t2.get_str() << ",";
        if (c.skipped)
            os << "skipped";
        else
            os << c.count;
        os << "\n";
    }
    return os.str();
}

std::string fit_csv(const HeightFit& fit) {
    std::ostringstream os;
    os << "h_t,h_hat\n";
    for (const auto& [x, y] : fit.support) os << fmt_real(x) << "," << fmt_real(y) << "\n";
    return os.str();
}

std::string points_csv(const std::vector<ProjPointC>& pts) {
    std::ostringstream os;
    os << "re,im\n";
    for (const auto& p : pts) {
        if (p.near_infinity())
            os << "inf,inf\n";
        else
            os << fmt_real(p.affine().real()) << "," << fmt_real(p.affine().imag()) << "\n";
    }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << content;
}

} // namespace sd
