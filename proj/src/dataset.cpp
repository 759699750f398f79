#include "daca/dataset.hpp"

#include <algorithm>

#include "daca/image_io.hpp"
#include "daca/labels.hpp"

namespace daca {

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".ppm" || ext == ".png") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<DatasetSample> load_dataset(const std::filesystem::path& images_dir,
                                        const std::filesystem::path& labels_dir,
                                        int width, int height,
                                        bool labels_optional) {
    std::vector<DatasetSample> samples;
    for (const auto& path : list_images(images_dir)) {
        DatasetSample sample;
        sample.id = path.stem().string();
        sample.image = resize_bilinear(load_image(path), width, height);
        const auto label_path = labels_dir / (sample.id + ".txt");
        if (std::filesystem::exists(label_path)) {
            sample.ground_truth = load_ground_truth(label_path, width, height);
        } else if (!labels_optional) {
            throw IoError("missing label file " + label_path.string());
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

}  // namespace daca
