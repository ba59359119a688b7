"""Segmentation backends.

A backend turns an RGB image into a per-pixel class-id mask (19 classes,
frozen order below) and a 1-D latent vector. Two implementations:

* ``toy`` — a deterministic color-rule labeler with a downsampled-intensity
  latent. No model weights, instant, identical output for identical input;
  used for tests and smoke runs.
* ``torch:<checkpoint.pt>`` — DeepLabV3 with a ResNet-50 backbone
  configured for the 19-class table, loading user-supplied weights (the
  published checkpoints for this class table are distributed separately).
  The latent vector is the globally average-pooled backbone output, passed
  through the checkpoint's 1000-wide projection head when one is present.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

CLASS_NAMES = (
    "road",
    "sidewalk",
    "building",
    "wall",
    "fence",
    "pole",
    "traffic light",
    "traffic sign",
    "vegetation",
    "terrain",
    "sky",
    "person",
    "rider",
    "car",
    "truck",
    "bus",
    "train",
    "motorcycle",
    "bicycle",
)

ROAD, SIDEWALK, BUILDING = 0, 1, 2
VEGETATION, TERRAIN, SKY = 8, 9, 10
CAR = 13


class SegmentationBackend(Protocol):
    latent_dim: int

    def segment(self, image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(H, W, 3) uint8 RGB -> ((H, W) uint8 class ids, (latent_dim,) float32)."""
        ...

    def segment_batch(
        self, images: list[np.ndarray]
    ) -> list[tuple[np.ndarray, np.ndarray]]: ...


class ToyBackend:
    """Color-rule labeler: bright blue is sky, green is vegetation, and so on.

    The latent vector is the 8x8 mean-pooled grayscale image plus the three
    channel means, scaled to [0, 1].
    """

    def __init__(self, pool: int = 8):
        self.pool = pool
        self.latent_dim = pool * pool + 3

    def segment(self, image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        img = np.asarray(image)
        if img.ndim != 3 or img.shape[2] != 3:
            raise ValueError("expected an (H, W, 3) RGB image")
        r = img[:, :, 0].astype(np.int16)
        g = img[:, :, 1].astype(np.int16)
        b = img[:, :, 2].astype(np.int16)
        brightness = (r + g + b) // 3
        flat = (np.abs(r - g) < 24) & (np.abs(g - b) < 24)

        mask = np.full(img.shape[:2], BUILDING, dtype=np.uint8)
        mask[(b > r) & (b > g) & (b > 110)] = SKY
        mask[(g > r) & (g > b) & (g > 70)] = VEGETATION
        mask[(r > g) & (g > b) & (r > 100) & (g > 60)] = TERRAIN
        mask[flat & (brightness < 60)] = CAR
        mask[flat & (brightness >= 60) & (brightness < 130)] = ROAD
        mask[flat & (brightness >= 130) & (brightness < 200)] = SIDEWALK

        latent = np.concatenate([self._pooled_gray(img), self._channel_means(img)])
        return mask, latent.astype(np.float32)

    def segment_batch(self, images: list[np.ndarray]) -> list[tuple[np.ndarray, np.ndarray]]:
        return [self.segment(img) for img in images]

    def _pooled_gray(self, img: np.ndarray) -> np.ndarray:
        gray = img.mean(axis=2) / 255.0
        h, w = gray.shape
        ys = np.linspace(0, h, self.pool + 1).astype(int)
        xs = np.linspace(0, w, self.pool + 1).astype(int)
        out = np.empty(self.pool * self.pool)
        for i in range(self.pool):
            for j in range(self.pool):
                block = gray[ys[i] : max(ys[i + 1], ys[i] + 1), xs[j] : max(xs[j + 1], xs[j] + 1)]
                out[i * self.pool + j] = block.mean()
        return out

    def _channel_means(self, img: np.ndarray) -> np.ndarray:
        return img.reshape(-1, 3).mean(axis=0) / 255.0


class TorchBackend:
    """DeepLabV3-ResNet50 with user-supplied 19-class weights, eval mode only."""

    def __init__(self, checkpoint: str, device: str = "cpu"):
        import torch
        from torchvision.models.segmentation import deeplabv3_resnet50

        self._torch = torch
        self.device = torch.device(device)
        self.model = deeplabv3_resnet50(weights=None, weights_backbone=None, num_classes=19)
        state = torch.load(checkpoint, map_location="cpu")
        if isinstance(state, dict) and "state_dict" in state:
            state = state["state_dict"]
        self.model.load_state_dict(state, strict=False)
        self.model.eval().to(self.device)

        self.projection = None
        head = state.get("latent_head.weight") if isinstance(state, dict) else None
        if head is not None and head.shape[0] == 1000:
            self.projection = torch.nn.Linear(head.shape[1], 1000, bias="latent_head.bias" in state)
            self.projection.weight.data.copy_(head)
            if "latent_head.bias" in state:
                self.projection.bias.data.copy_(state["latent_head.bias"])
            self.projection.eval().to(self.device)
            self.latent_dim = 1000
        else:
            self.latent_dim = 2048

    def segment(self, image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        torch = self._torch
        x = torch.from_numpy(np.asarray(image)).permute(2, 0, 1).float().div_(255.0)
        mean = torch.tensor([0.485, 0.456, 0.406]).view(3, 1, 1)
        std = torch.tensor([0.229, 0.224, 0.225]).view(3, 1, 1)
        x = ((x - mean) / std).unsqueeze(0).to(self.device)
        with torch.no_grad():
            features = self.model.backbone(x)["out"]
            logits = self.model.classifier(features)
            logits = torch.nn.functional.interpolate(
                logits, size=image.shape[:2], mode="bilinear", align_corners=False
            )
            mask = logits.argmax(dim=1)[0].to(torch.uint8).cpu().numpy()
            pooled = features.mean(dim=(2, 3))[0]
            if self.projection is not None:
                pooled = self.projection(pooled)
        return mask, pooled.cpu().numpy().astype(np.float32)

    def segment_batch(self, images: list[np.ndarray]) -> list[tuple[np.ndarray, np.ndarray]]:
        # true batched inference only when every image shares one shape
        if len({img.shape for img in images}) != 1:
            return [self.segment(img) for img in images]
        torch = self._torch
        x = torch.stack(
            [torch.from_numpy(np.asarray(i)).permute(2, 0, 1).float().div_(255.0) for i in images]
        )
        mean = torch.tensor([0.485, 0.456, 0.406]).view(1, 3, 1, 1)
        std = torch.tensor([0.229, 0.224, 0.225]).view(1, 3, 1, 1)
        x = ((x - mean) / std).to(self.device)
        with torch.no_grad():
            features = self.model.backbone(x)["out"]
            logits = self.model.classifier(features)
            logits = torch.nn.functional.interpolate(
                logits, size=images[0].shape[:2], mode="bilinear", align_corners=False
            )
            masks = logits.argmax(dim=1).to(torch.uint8).cpu().numpy()
            pooled = features.mean(dim=(2, 3))
            if self.projection is not None:
                pooled = self.projection(pooled)
            vectors = pooled.cpu().numpy().astype(np.float32)
        return [(masks[i], vectors[i]) for i in range(len(images))]


def load_backend(spec: str, device: str = "cpu") -> SegmentationBackend:
    """Backend from a model spec: ``toy`` or ``torch:<checkpoint path>``."""
    if spec == "toy":
        return ToyBackend()
    if spec.startswith("torch:"):
        return TorchBackend(spec.split(":", 1)[1], device=device)
    raise ValueError(f"unknown model spec {spec!r}; use 'toy' or 'torch:<checkpoint>'")
