# Utils test module