# anyonwalk Test Suite
