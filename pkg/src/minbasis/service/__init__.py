"""Request/response models, pure operations, and the FastAPI app."""
