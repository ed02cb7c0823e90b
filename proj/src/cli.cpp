#include "inkmark/cli.hpp"

#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "inkmark/capacity.hpp"
#include "inkmark/codec.hpp"
#include "inkmark/errors.hpp"
#include "inkmark/image.hpp"
#include "inkmark/ledger.hpp"
#include "inkmark/steganalysis.hpp"

namespace inkmark::cli {

namespace {

std::vector<std::uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot read " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw StorageError("cannot read " + path);
    return bytes;
}

void spit(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              std::streamsize(bytes.size()));
    out.flush();
    if (!out) throw StorageError("cannot write " + path);
}

void spit(const std::string& path, const std::string& text) {
    spit(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

WatermarkBits payload_from(const std::string& text, const std::string& bits,
                           bool have_bits) {
    return have_bits ? bits_from_string(bits) : text_to_bits(text);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fragile watermarking for black-white document images"};
    app.name("inkmark");
    app.require_subcommand(1);

    std::string in_path, out_path, text, bits, report_path, compare_path, chain_path;
    int step = 40;
    int width = 0, height = 0, strokes = 0;
    std::size_t nbits = 0, max_lag = 100;
    std::uint64_t seed = 0;
    std::vector<int> steps{40};
    bool decode = false;

    auto* binarize_cmd =
        app.add_subcommand("binarize", "threshold a grayscale page to black-white");
    binarize_cmd->add_option("input", in_path, "grayscale image (pgm)")->required();
    binarize_cmd->add_option("output", out_path, "bitmap output (pbm)")->required();

    auto* embed_cmd = app.add_subcommand("embed", "hide a payload in a bitmap page");
    embed_cmd->add_option("input", in_path, "cover bitmap (pbm)")->required();
    embed_cmd->add_option("output", out_path, "watermarked bitmap (pbm)")->required();
    embed_cmd->add_option("--step", step, "strip height in pixels")->capture_default_str();
    auto* embed_text = embed_cmd->add_option("--text", text, "payload as utf-8 text");
    auto* embed_bits = embed_cmd->add_option("--bits", bits, "payload as a 0/1 string");
    embed_text->excludes(embed_bits);
    embed_bits->excludes(embed_text);
    embed_cmd->add_option("--report", report_path, "write an embedding report (json)");

    auto* extract_cmd = app.add_subcommand("extract", "read hidden bits back out");
    extract_cmd->add_option("input", in_path, "watermarked bitmap (pbm)")->required();
    extract_cmd->add_option("--step", step, "strip height in pixels")->capture_default_str();
    extract_cmd->add_option("--nbits", nbits, "number of bits to extract")->required();
    extract_cmd->add_flag("--decode", decode, "decode the bits as utf-8 text");

    auto* verify_cmd = app.add_subcommand("verify", "check a page against a payload");
    verify_cmd->add_option("input", in_path, "watermarked bitmap (pbm)")->required();
    verify_cmd->add_option("--step", step, "strip height in pixels")->capture_default_str();
    auto* verify_text = verify_cmd->add_option("--text", text, "expected utf-8 text");
    auto* verify_bits = verify_cmd->add_option("--bits", bits, "expected 0/1 string");
    verify_text->excludes(verify_bits);
    verify_bits->excludes(verify_text);

    auto* capacity_cmd = app.add_subcommand("capacity", "report codable bits per strip height");
    capacity_cmd->add_option("input", in_path, "bitmap page (pbm)")->required();
    capacity_cmd->add_option("--steps", steps, "strip heights to evaluate")
        ->delimiter(',')
        ->capture_default_str();

    auto* acorr_cmd = app.add_subcommand("acorr", "parity autocorrelation of a page");
    acorr_cmd->add_option("input", in_path, "bitmap page (pbm)")->required();
    acorr_cmd->add_option("--step", step, "strip height in pixels")->capture_default_str();
    acorr_cmd->add_option("--max-lag", max_lag, "largest lag to report")
        ->capture_default_str();
    acorr_cmd->add_option("--compare", compare_path,
                          "baseline page; print per-lag difference (input minus baseline)");

    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic handwriting page");
    synth_cmd->add_option("output", out_path, "bitmap output (pbm)")->required();
    synth_cmd->add_option("--width", width, "page width in pixels")->required();
    synth_cmd->add_option("--height", height, "page height in pixels")->required();
    synth_cmd->add_option("--strokes", strokes, "number of pen strokes")->required();
    synth_cmd->add_option("--seed", seed, "generator seed")->required();

    auto* chain_cmd = app.add_subcommand("chain", "append-only ledger of watermarked pages");
    chain_cmd->require_subcommand(1);
    auto* chain_init = chain_cmd->add_subcommand("init", "start an empty chain");
    chain_init->add_option("--chain", chain_path, "chain file to create")->required();
    auto* chain_append = chain_cmd->add_subcommand("append", "watermark a page and record it");
    chain_append->add_option("input", in_path, "raw bitmap page (pbm)")->required();
    chain_append->add_option("--chain", chain_path, "chain file to extend")->required();
    chain_append->add_option("--text", text, "metadata to embed and record")->required();
    chain_append->add_option("--step", step, "strip height in pixels")->capture_default_str();
    auto* chain_audit = chain_cmd->add_subcommand("audit", "verify every recorded block");
    chain_audit->add_option("--chain", chain_path, "chain file to audit")->required();

    try {
        // CLI11's vector overload consumes arguments from the back.
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*binarize_cmd) {
            GrayImage gray = load_pgm(slurp(in_path));
            BinaryImage page = binarize(gray, otsu_threshold(gray));
            spit(out_path, save_pbm(page, PbmFormat::P4));
            return 0;
        }

        if (*embed_cmd) {
            if (!*embed_text && !*embed_bits) {
                err << "embed: either --text or --bits is required\n";
                return 2;
            }
            BinaryImage page = load_pbm(slurp(in_path));
            auto [stamped, report] =
                embed(page, payload_from(text, bits, bool(*embed_bits)), step);
            spit(out_path, save_pbm(stamped, PbmFormat::P4));
            if (!report_path.empty()) spit(report_path, report_json(report));
            return 0;
        }

        if (*extract_cmd) {
            BinaryImage page = load_pbm(slurp(in_path));
            WatermarkBits wm = extract_bits(page, nbits, step);
            if (!decode) {
                out << bits_to_string(wm) << "\n";
                return 0;
            }
            std::optional<std::string> decoded = bits_to_text(wm);
            if (!decoded) {
                err << "extract: bits do not decode to utf-8 text\n";
                return 1;
            }
            out << *decoded << "\n";
            return 0;
        }

        if (*verify_cmd) {
            if (!*verify_text && !*verify_bits) {
                err << "verify: either --text or --bits is required\n";
                return 2;
            }
            BinaryImage page = load_pbm(slurp(in_path));
            bool ok = verify_watermark(page, payload_from(text, bits, bool(*verify_bits)),
                                       step);
            if (!ok) {
                err << "watermark mismatch\n";
                return 1;
            }
            out << "watermark verified\n";
            return 0;
        }

        if (*capacity_cmd) {
            BinaryImage page = load_pbm(slurp(in_path));
            CapacityCurve curve = capacity_curve(page, steps);
            out << "step,d\n";
            for (const auto& [s, d] : curve.entries) out << s << "," << d << "\n";
            return 0;
        }

        if (*acorr_cmd) {
            BinaryImage page = load_pbm(slurp(in_path));
            AcorrValues after = autocorr(parity_sequence(page, step), max_lag);
            if (compare_path.empty()) {
                out << "lag,value\n";
                for (const auto& [lag, value] : after.lags)
                    out << lag << "," << value << "\n";
                return 0;
            }
            BinaryImage baseline = load_pbm(slurp(compare_path));
            AcorrValues before = autocorr(parity_sequence(baseline, step), max_lag);
            out << "lag,diff\n";
            for (const auto& [lag, diff] : acorr_diff(before, after))
                out << lag << "," << diff << "\n";
            return 0;
        }

        if (*synth_cmd) {
            BinaryImage page = generate_synthetic(width, height, strokes, seed);
            spit(out_path, save_pbm(page, PbmFormat::P4));
            return 0;
        }

        if (*chain_init) {
            Chain::create(chain_path);
            out << "initialized empty chain at " << chain_path << "\n";
            return 0;
        }

        if (*chain_append) {
            Chain chain = Chain::open(chain_path);
            BinaryImage page = load_pbm(slurp(in_path));
            Block block = chain.append_record(page, text, step);
            out << "block " << block.index << " record_hash "
                << to_hex(block.record_hash) << "\n";
            return 0;
        }

        if (*chain_audit) {
            Chain chain = Chain::open(chain_path);
            bool all_intact = true;
            for (const TamperVerdict& v : chain.verify_chain()) {
                out << "block " << v.block_index << ": " << to_string(v.kind);
                if (!v.detail.empty()) out << " (" << v.detail << ")";
                out << "\n";
                all_intact = all_intact && v.kind == TamperKind::Intact;
            }
            return all_intact ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace inkmark::cli
