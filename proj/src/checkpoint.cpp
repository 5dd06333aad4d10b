#include "safecritic/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "safecritic/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace sc {

void save_checkpoint(const std::string& path, const ParamStore& params) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open checkpoint for writing: " + path);
    f << "safecritic-checkpoint v1 " << params.entries().size() << "\n";
    for (const auto& e : params.entries()) {
        f << e.name << " ";
        for (std::size_t i = 0; i < e.tensor->shape.size(); ++i) {
            if (i) f << ",";
            f << e.tensor->shape[i];
        }
        f << "\n";
    }
    for (const auto& e : params.entries())
        f.write(reinterpret_cast<const char*>(e.tensor->data.data()),
                static_cast<std::streamsize>(e.tensor->size() * sizeof(double)));
    if (!f) throw DataError("short write to checkpoint: " + path);
}

void load_checkpoint(const std::string& path, ParamStore& params) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open checkpoint: " + path);
    std::string magic, version;
    std::size_t count = 0;
    f >> magic >> version >> count;
    if (magic != "safecritic-checkpoint" || version != "v1")
        throw DataError("checkpoint version mismatch in " + path + " (header: " + magic +
                        " " + version + ")");
    if (count != params.entries().size())
        throw DataError("checkpoint holds " + std::to_string(count) + " parameters, model has " +
                        std::to_string(params.entries().size()));
    f.ignore(1, '\n');
    for (const auto& e : params.entries()) {
        std::string line;
        if (!std::getline(f, line)) throw DataError("truncated checkpoint manifest: " + path);
        std::istringstream ls(line);
        std::string name, dims;
        ls >> name >> dims;
        if (name != e.name)
            throw DataError("checkpoint parameter order mismatch: expected " + e.name +
                            ", found " + name);
        std::vector<std::size_t> shape;
        std::istringstream ds(dims);
        std::string tok;
        while (std::getline(ds, tok, ',')) shape.push_back(std::stoul(tok));
        if (shape != e.tensor->shape)
            throw DataError("checkpoint shape mismatch for " + e.name);
    }
    for (const auto& e : params.entries()) {
        f.read(reinterpret_cast<char*>(e.tensor->data.data()),
               static_cast<std::streamsize>(e.tensor->size() * sizeof(double)));
        if (!f) throw DataError("truncated checkpoint payload: " + path);
    }
}

}  // namespace sc
