package main

import "fmt"

func worker(file string, results chan int) {
	results <- len(file)
}

func main() {
	files := []string{"a.txt", "b.txt", "c.txt"}
	a := make(chan int, len(files))
	for i := 0; i < len(files); i++ {
		go worker(files[i], a)
	}
	for j := 0; j < len(files); j++ {
		size := <-a
		fmt.Println(size)
	}
	close(a)
}
